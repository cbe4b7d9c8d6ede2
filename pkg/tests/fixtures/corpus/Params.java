public class Params {

    public String showBug(String name, int age, boolean formal, double height) {
        String prefix = "mr ";
        if (!formal) {
            prefix = "";
        }
        String described = prefix + name + ":" + age + ":" + height;
        return described;
    }
}
