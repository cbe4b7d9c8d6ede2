public class StringProbe {

    public boolean showBug(String candidate) {
        String trimmed = candidate.trim();
        boolean empty = trimmed.isEmpty();
        if (empty) {
            return false;
        }
        return trimmed.startsWith("ok");
    }
}
