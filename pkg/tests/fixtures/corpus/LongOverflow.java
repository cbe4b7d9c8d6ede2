public class LongOverflow {

    public long showBug(long base) {
        long doubled = base * 2L;
        long shifted = doubled + 1L;
        return shifted;
    }
}
