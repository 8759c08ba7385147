// Generates tests/golden/engine_conformance.json: first-solution outcomes
// for the 20-query conformance suite, recorded from tau-prolog.
//
// Usage: npm install tau-prolog && node gen_engine_golden.js > out.json
// The output is frozen into the test tree after a manual audit.

const pl = require("tau-prolog");

const PROGRAM = `min(A, B, A) :- A < B, !.
min(A, B, B).
classify(X, neg) :- X < 0, !.
classify(0, zero) :- !.
classify(_, pos).
my_member(X, [X|_]).
my_member(X, [_|T]) :- my_member(X, T).
my_append([], L, L).
my_append([H|T], L, [H|R]) :- my_append(T, L, R).
first_even([H|_], H) :- 0 =:= H mod 2, !.
first_even([_|T], E) :- first_even(T, E).
len([], 0).
len([_|T], N) :- len(T, M), N is M + 1.
`;

const QUERIES = [
  "min(1, 2, R)",
  "min(2, 1, R)",
  "min(2, 2, R)",
  "classify(-3, C)",
  "classify(0, C)",
  "X is 1 / 0",
  "my_member(X, [a, b, c])",
  "my_member(d, [a, b, c])",
  "\\+ my_member(d, [a, b, c])",
  "my_append(X, [c], [a, b, c])",
  "(my_member(b, [a, b]) -> R = yes ; R = no)",
  "(my_member(z, [a, b]) -> R = yes ; R = no)",
  "X is 3 * 4 + 2 mod 3",
  "X is -7 mod 2",
  "X is 7 / 2",
  "1 < a",
  "X < 1",
  "undefined_pred(1)",
  "first_even([3, 5, 8, 7], E)",
  "len([a, b, c], N)",
];

// Canonical rendering matching the implementation's printer for the value
// sorts that appear in bindings: numbers, atoms, lists, plain compounds.
function render(t) {
  if (pl.type.is_number(t)) {
    if (t.is_float) {
      return Number.isInteger(t.value) ? t.value.toFixed(1) : String(t.value);
    }
    return String(t.value);
  }
  if (pl.type.is_variable(t)) return "_";
  if (pl.type.is_atom(t)) return t.id;
  if (t.indicator === "./2") {
    const elems = [];
    let cur = t;
    while (cur.indicator === "./2") {
      elems.push(render(cur.args[0]));
      cur = cur.args[1];
    }
    if (pl.type.is_atom(cur) && cur.id === "[]") {
      return "[" + elems.join(", ") + "]";
    }
    return "[" + elems.join(", ") + "|" + render(cur) + "]";
  }
  return t.id + "(" + t.args.map(render).join(", ") + ")";
}

function errorKind(errTerm) {
  // Errors arrive as throw(error(Kind, Context)); the kind functor is what
  // we record.
  let t = errTerm;
  if (pl.type.is_term(t) && t.indicator === "throw/1") {
    t = t.args[0];
  }
  if (pl.type.is_term(t) && t.indicator === "error/2") {
    return t.args[0].id;
  }
  return "unknown";
}

const session = pl.create(1000000);
const results = [];

function runQuery(i) {
  if (i >= QUERIES.length) {
    console.log(JSON.stringify({ program: PROGRAM, queries: results }, null, 2));
    return;
  }
  const goal = QUERIES[i];
  session.query(goal + ".", {
    success: () => {
      session.answer({
        success: (answer) => {
          const bindings = {};
          for (const name of Object.keys(answer.links).sort()) {
            if (name.startsWith("_")) continue;
            bindings[name] = render(answer.links[name]);
          }
          results.push({ goal, expect: "success", bindings });
          runQuery(i + 1);
        },
        fail: () => {
          results.push({ goal, expect: "failure" });
          runQuery(i + 1);
        },
        error: (err) => {
          results.push({ goal, expect: "error", error: errorKind(err) });
          runQuery(i + 1);
        },
        limit: () => {
          results.push({ goal, expect: "limit" });
          runQuery(i + 1);
        },
      });
    },
    error: (err) => {
      results.push({ goal, expect: "goal-parse-error", detail: "" + err });
      runQuery(i + 1);
    },
  });
}

session.consult(PROGRAM, {
  success: () => runQuery(0),
  error: (err) => {
    console.error("consult failed: " + err);
    process.exit(1);
  },
});
