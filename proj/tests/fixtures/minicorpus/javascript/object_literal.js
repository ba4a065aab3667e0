const math = {
  double(x) {
    return x * 2;
  },
  quad(x) {
    return math.double(math.double(x));
  },
};
const fmt = { show: (v) => "value=" + v };
console.log(fmt.show(math.quad(3)));
