function apply_twice(fn, x) {
  return fn(fn(x));
}
function inc(x) {
  return x + 1;
}
function log_item(item) {
  console.log("item", item);
}
[1, 2].forEach(log_item);
console.log(apply_twice(inc, 5));
