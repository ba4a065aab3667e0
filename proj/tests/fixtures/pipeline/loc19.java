public class Loc {
    static int total() {
        int t = 0;
        t += 0;
        t += 1;
        t += 2;
        t += 3;
        t += 4;
        t += 5;
        t += 6;
        t += 7;
        t += 8;
        t += 9;
        return t;
    }
    public static void main(String[] args) {
        System.out.println(total());
    }
}

