public class WhileWithBreak {

    public int showBug(int target) {
        int probe = 0;
        while (probe < 1000) {
            if (probe * probe >= target) {
                break;
            }
            probe = probe + 1;
        }
        return probe;
    }
}
