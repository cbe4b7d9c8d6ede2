public class AssignChainTest {

    public void testChain() {
        AssignChain subject = new AssignChain();
        Assert.assertEquals(12, subject.showBug(10));
    }
}
