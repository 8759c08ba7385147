// Generates tests/golden/parser_differential.json: 100 ground terms
// rendered as source text, each paired with the shape the reference
// reader (tau-prolog) assigns to it. The implementation's parser must
// produce the same shapes.
//
// Prefix-operator arguments are always parenthesized in the rendered
// texts: the reference reader binds bare prefix arguments tighter than
// ISO's priority rule, and the corner is not what this oracle is about.
//
// Usage: npm install tau-prolog && node gen_parser_golden.js > out.json

const pl = require("tau-prolog");

const INFIX = [
  [";", 1100, "xfy"],
  ["->", 1050, "xfy"],
  [",", 1000, "xfy"],
  ["=", 700, "xfx"],
  ["\\=", 700, "xfx"],
  ["==", 700, "xfx"],
  ["\\==", 700, "xfx"],
  ["=:=", 700, "xfx"],
  ["=\\=", 700, "xfx"],
  ["<", 700, "xfx"],
  [">", 700, "xfx"],
  ["=<", 700, "xfx"],
  [">=", 700, "xfx"],
  ["is", 700, "xfx"],
  ["+", 500, "yfx"],
  ["-", 500, "yfx"],
  ["*", 400, "yfx"],
  ["/", 400, "yfx"],
  ["mod", 400, "yfx"],
];
const PREFIX = [
  ["\\+", 900],
  ["-", 200],
];
const ATOMS = ["a", "b", "c", "foo", "bar", "baz_qux", "hello world"];

let seed = 0xc0ffee;
function rnd() {
  seed = (seed * 1103515245 + 12345) & 0x7fffffff;
  return seed / 0x7fffffff;
}
function pick(arr) {
  return arr[Math.floor(rnd() * arr.length)];
}

function tree(depth) {
  const r = rnd();
  if (depth <= 0 || r < 0.28) {
    const k = rnd();
    if (k < 0.35) {
      const v = Math.floor(rnd() * 40) - 10;
      return { n: String(v) };
    }
    if (k < 0.45) return { fl: Math.floor(rnd() * 9) + 0.5 };
    if (k < 0.9) return { a: pick(ATOMS) };
    return { a: "[]" };
  }
  if (r < 0.5) {
    const n = 1 + Math.floor(rnd() * 3);
    return { c: pick(["f", "g", "h"]), args: Array.from({ length: n }, () => tree(depth - 1)) };
  }
  if (r < 0.6) {
    const n = Math.floor(rnd() * 3);
    let t = { a: "[]" };
    for (let i = 0; i < n; i++) t = { c: ".", args: [tree(depth - 1), t] };
    return t;
  }
  if (r < 0.7) {
    return { c: pick(PREFIX)[0], args: [tree(depth - 1)] };
  }
  const op = pick(INFIX);
  return { c: op[0], args: [tree(depth - 1), tree(depth - 1)] };
}

function prio(t) {
  if (t.c && t.args.length === 2 && t.c !== ".") {
    const d = INFIX.find((o) => o[0] === t.c);
    if (d) return d[1];
  }
  if (t.c && t.args.length === 1) {
    const d = PREFIX.find((o) => o[0] === t.c);
    if (d) return d[1];
  }
  return 0;
}

function needsQuote(a) {
  return !/^[a-z][a-zA-Z0-9_]*$/.test(a) && a !== "[]";
}

function render(t, max) {
  if (prio(t) > max) return "(" + render(t, 1200) + ")";
  if (t.n !== undefined) return t.n;
  if (t.fl !== undefined) return String(t.fl);
  if (t.a !== undefined) return needsQuote(t.a) ? "'" + t.a + "'" : t.a;
  if (t.c === "." && t.args.length === 2) {
    const elems = [];
    let cur = t;
    while (cur.c === "." && cur.args && cur.args.length === 2) {
      elems.push(render(cur.args[0], 999));
      cur = cur.args[1];
    }
    return "[" + elems.join(", ") + "]";
  }
  const inf = t.args.length === 2 && INFIX.find((o) => o[0] === t.c);
  if (inf) {
    const [name, p, type] = inf;
    const lmax = type === "yfx" ? p : p - 1;
    const rmax = type === "xfy" ? p : p - 1;
    return render(t.args[0], lmax) + " " + name + " " + render(t.args[1], rmax);
  }
  const pre = t.args.length === 1 && PREFIX.find((o) => o[0] === t.c);
  if (pre) {
    return t.c + " (" + render(t.args[0], 1200) + ")";
  }
  const head = needsQuote(t.c) ? "'" + t.c + "'" : t.c;
  return head + "(" + t.args.map((a) => render(a, 999)).join(", ") + ")";
}

function shape(t) {
  if (pl.type.is_number(t)) {
    return t.is_float ? { fl: t.value } : { n: String(t.value) };
  }
  if (pl.type.is_atom(t)) return { a: t.id };
  if (pl.type.is_term(t)) return { c: t.id, args: t.args.map(shape) };
  return { unknown: "" + t };
}

const entries = [];
function generate(next) {
  if (entries.length >= 100) {
    console.log(JSON.stringify(entries, null, 2));
    return;
  }
  const text = render(tree(3), 999);
  const session = pl.create(1000);
  session.query("T = (" + text + ").", {
    success: () => {
      session.answer({
        success: (answer) => {
          entries.push({ text, shape: shape(answer.links["T"]) });
          next(next);
        },
        fail: () => next(next),
        error: () => next(next),
      });
    },
    error: (err) => {
      console.error("reference reader rejected: " + text + " :: " + err);
      process.exit(1);
    },
  });
}
generate(generate);
