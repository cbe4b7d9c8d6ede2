public class TryCatchSwallowTest {

    public void testParsesNumber() {
        TryCatchSwallow subject = new TryCatchSwallow();
        Assert.assertEquals(41, subject.showBug("41"));
    }

    public void testSwallowsGarbage() {
        TryCatchSwallow subject = new TryCatchSwallow();
        Assert.assertEquals(-1, subject.showBug("not a number"));
    }
}
