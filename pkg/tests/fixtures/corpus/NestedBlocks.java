public class NestedBlocks {

    public int showBug(int level) {
        int score = 0;
        if (level > 10) {
            int bonus = level * 3;
            if (bonus > 40) {
                score = bonus + 1;
            } else {
                score = bonus;
            }
        } else {
            score = level;
        }
        return score;
    }
}
