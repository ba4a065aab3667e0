class Counter {
  constructor(start) {
    this.value = start;
  }
  inc() {
    this.value += 1;
    return this;
  }
  read() {
    return this.value;
  }
  static make() {
    return new Counter(10);
  }
}
const c = Counter.make();
c.inc().inc();
console.log("counter", c.read());
