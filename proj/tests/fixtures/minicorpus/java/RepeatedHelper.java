public class RepeatedHelper {
    static int helper(int x) {
        return x + 1;
    }

    static int run() {
        return helper(1) + helper(2);
    }

    public static void main(String[] args) {
        System.out.println(run() + " " + run());
    }
}
