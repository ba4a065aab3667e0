public class StraightCalls {
    static void f() {
        System.out.println("in f");
        g();
    }

    static void g() {
        System.out.println("in g");
    }

    public static void main(String[] args) {
        f();
    }
}
