public class ForWithContinue {

    public int showBug(int limit) {
        int evens = 0;
        for (int i = 0; i < limit; i = i + 1) {
            if (i % 2 == 1) {
                continue;
            }
            evens = evens + 1;
        }
        while (evens > 100) {
            evens = evens - 1;
        }
        return evens;
    }
}
