public class LoopSum {

    public int showBug(int limit) {
        int total = 0;
        for (int i = 0; i < limit; i = i + 1) {
            total = total + i;
        }
        int scaled = total * 2;
        return scaled;
    }
}
