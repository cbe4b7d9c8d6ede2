public class DoWhileOnly {

    public int showBug(int seedValue) {
        int value = seedValue;
        do {
            value = value + 3;
        } while (value < 10);
        return value;
    }
}
