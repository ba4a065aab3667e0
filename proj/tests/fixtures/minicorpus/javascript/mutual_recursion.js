function is_even(n) {
  return n === 0 ? true : is_odd(n - 1);
}
function is_odd(n) {
  return n === 0 ? false : is_even(n - 1);
}
console.log(is_even(4), is_odd(1));
