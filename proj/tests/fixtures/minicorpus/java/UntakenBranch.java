public class UntakenBranch {
    static String[] parse(String q) {
        if (q.length() > 0) {
            return tokenize(q);
        }
        return fallback();
    }

    static String[] tokenize(String q) {
        return q.split(" ");
    }

    static String[] fallback() {
        return new String[0];
    }

    public static void main(String[] args) {
        System.out.println(parse("a b").length);
    }
}
