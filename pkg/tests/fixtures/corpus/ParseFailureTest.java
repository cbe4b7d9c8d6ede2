public class ParseFailureTest {

    public void testParses() {
        ParseFailure subject = new ParseFailure();
        Assert.assertEquals(14, subject.showBug("7"));
    }

    public void testGarbageThrows() {
        ParseFailure subject = new ParseFailure();
        subject.showBug("seven");
        Assert.fail("expected a parse failure");
    }
}
