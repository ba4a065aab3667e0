public class Varargs {
    static int sum(int... values) {
        int total = 0;
        for (int i = 0; i < values.length; i++) {
            total += values[i];
        }
        return total;
    }

    static int twice(int x) {
        return sum(x, x);
    }

    public static void main(String[] args) {
        System.out.println(sum(1, 2, 3) + " " + twice(4));
    }
}
