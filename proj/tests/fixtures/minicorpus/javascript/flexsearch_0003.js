function is_string(x) { return typeof x === "string"; }
function is_array(x) { return Array.isArray(x); }
function toArray(set, sorted) {
  const out = Array.from(set);
  return sorted ? out.sort() : out;
}
function concat(arrs) { return [].concat.apply([], arrs); }
function sort_by_length_down(a, b) { return b.length - a.length; }
function create_object() { return Object.create(null); }
function inherit(target, source) { return Object.assign(source, target); }

function parse_simple(obj, tree) {
  if (is_string(obj) && is_array(tree))
    return concat([toArray(new Set(tree), true), [obj]]).sort(sort_by_length_down);
  return inherit(tree, create_object());  // never executed on test input
}
console.log(parse_simple("abc", ["x", "yy"]).join(" "));
