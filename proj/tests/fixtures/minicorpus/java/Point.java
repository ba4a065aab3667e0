public class Point {
    final int x;
    final int y;

    Point(int x, int y) {
        this.x = x;
        this.y = y;
    }

    Point() {
        this(0, 0);
    }

    Point plus(Point other) {
        return new Point(x + other.x, y + other.y);
    }

    public String toString() {
        return "(" + x + ", " + y + ")";
    }

    public static void main(String[] args) {
        Point p = new Point().plus(new Point(1, 2));
        System.out.println(p.toString());
    }
}
