public class Exceptions {
    static int risky(int x) {
        if (x < 0) {
            throw new IllegalArgumentException("negative input");
        }
        return check(x);
    }

    static int check(int x) {
        return x * 10;
    }

    static String safe(int x) {
        try {
            return String.valueOf(risky(x));
        } catch (IllegalArgumentException e) {
            return recover(e);
        }
    }

    static String recover(IllegalArgumentException e) {
        return e.getMessage();
    }

    public static void main(String[] args) {
        System.out.println(safe(1) + " " + safe(-1));
    }
}
