public class WhileCountdown {

    public int showBug(int start) {
        int steps = 0;
        while (start > 0) {
            start = start - 1;
            steps = steps + 1;
        }
        return steps;
    }
}
