public class DoWhileOnlyTest {

    public void testRunsAtLeastOnce() {
        DoWhileOnly subject = new DoWhileOnly();
        Assert.assertEquals(103, subject.showBug(100));
    }

    public void testLoopsUpToTen() {
        DoWhileOnly subject = new DoWhileOnly();
        Assert.assertEquals(10, subject.showBug(1));
    }
}
