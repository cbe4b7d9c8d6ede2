public class SwitchClassifierTest {

    public void testLow() {
        SwitchClassifier subject = new SwitchClassifier();
        Assert.assertEquals("low", subject.showBug(1));
    }

    public void testFallthroughPair() {
        SwitchClassifier subject = new SwitchClassifier();
        Assert.assertEquals("mid", subject.showBug(2));
        Assert.assertEquals("mid", subject.showBug(3));
    }

    public void testDefault() {
        SwitchClassifier subject = new SwitchClassifier();
        Assert.assertEquals("high", subject.showBug(9));
    }
}
