public class LongOverflowTest {

    public void testWrapsAround() {
        LongOverflow subject = new LongOverflow();
        Assert.assertEquals(-1L, subject.showBug(Long.MAX_VALUE));
    }

    public void testSmallValue() {
        LongOverflow subject = new LongOverflow();
        Assert.assertEquals(21L, subject.showBug(10L));
    }
}
