public class MinValueEdgeTest {

    public void testMinValueStaysNegative() {
        MinValueEdge subject = new MinValueEdge();
        Assert.assertEquals(Integer.MIN_VALUE, subject.showBug(Integer.MIN_VALUE));
    }

    public void testRegularNegative() {
        MinValueEdge subject = new MinValueEdge();
        Assert.assertEquals(17, subject.showBug(-17));
    }
}
