public class TryCatchSwallow {

    public int showBug(String raw) {
        int parsed = 0;
        try {
            parsed = Integer.parseInt(raw);
        } catch (NumberFormatException problem) {
            parsed = -1;
        }
        return parsed;
    }
}
