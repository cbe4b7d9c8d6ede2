public class NestedLoops {

    public int showBug(int rows, int cols) {
        int cells = 0;
        for (int r = 0; r < rows; r = r + 1) {
            int c = 0;
            while (c < cols) {
                cells = cells + 1;
                c = c + 1;
            }
        }
        return cells;
    }
}
