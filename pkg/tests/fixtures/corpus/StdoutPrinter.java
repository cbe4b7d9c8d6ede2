public class StdoutPrinter {

    public void showBug(int rounds) {
        System.out.println("starting");
        for (int i = 0; i < rounds; i = i + 1) {
            System.out.println("round " + i);
        }
        System.out.println("done");
    }
}
