function parse(q) {
  if (q.length > 0) return tokenize(q);
  return fallback();
}
function tokenize(q) {
  return q.split(" ");
}
function fallback() {
  return [];
}
console.log(parse("a b"));
