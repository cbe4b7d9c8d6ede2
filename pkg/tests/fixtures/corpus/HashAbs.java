public class HashAbs {

    public int showBug(String input) {
        int hash = input.hashCode();
        int result = Math.abs(hash);
        return result;
    }
}
