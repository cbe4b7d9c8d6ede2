public class BooleanGates {

    public boolean showBug(boolean armed, boolean locked, int level) {
        boolean privileged = level >= 7;
        boolean open = armed && !locked;
        return open || privileged;
    }
}
