function helper(x) {
  return x + 1;
}
function run() {
  return helper(1) + helper(2);
}
console.log(run(), run());
