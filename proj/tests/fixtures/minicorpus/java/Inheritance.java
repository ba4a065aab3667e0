class Animal {
    protected final String name;

    Animal(String name) {
        this.name = name;
        System.out.println(describe());
    }

    String describe() {
        return "animal " + name;
    }

    String sound() {
        return "...";
    }
}

class Dog extends Animal {
    Dog(String name) {
        super(name);
    }

    String describe() {
        return "dog " + name;
    }

    String sound() {
        return "woof " + super.sound();
    }
}

public class Inheritance {
    public static void main(String[] args) {
        Animal a = new Dog("rex");
        System.out.println(a.sound());
    }
}
