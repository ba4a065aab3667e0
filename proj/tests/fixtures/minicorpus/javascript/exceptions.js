function risky(x) {
  if (x < 0) throw new Error("negative input");
  return check(x);
}
function check(x) {
  return x * 10;
}
function safe(x) {
  try {
    return risky(x);
  } catch (e) {
    return recover(e);
  }
}
function recover(e) {
  return e.message;
}
console.log(safe(1), safe(-1));
