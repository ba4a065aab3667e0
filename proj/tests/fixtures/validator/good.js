function h(x) {
  return x + 1;
}
function g(x) {
  return h(x) * 2;
}
function f(x) {
  return g(x) - 1;
}
console.log(f(3));
