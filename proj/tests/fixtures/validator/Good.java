public class Good {
    static int h(int x) {
        return x + 1;
    }

    static int g(int x) {
        return h(x) * 2;
    }

    public static void main(String[] args) {
        System.out.println(g(3));
    }
}
