async function fetch_value(x) {
  return x * 2;
}
async function load(x) {
  const v = await fetch_value(x);
  return finish(v);
}
function finish(v) {
  return v + 1;
}
load(3).then(function report(v) {
  console.log("result", v);
});
