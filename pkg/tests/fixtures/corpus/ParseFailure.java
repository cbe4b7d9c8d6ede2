public class ParseFailure {

    public int showBug(String raw) {
        int number = Integer.parseInt(raw);
        return number * 2;
    }
}
