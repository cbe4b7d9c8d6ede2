public class StringConcat {

    public String showBug(String name, int count) {
        String greeting = "hello " + name;
        String tail = greeting + "!" + count;
        return tail.toUpperCase();
    }
}
