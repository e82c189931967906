//! Seeded random terms for the property suites.

use purelog::{Substitution, Term, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
    /// Variables are drawn from ids `0..vars`, named `X0`, `X1`, ...
    pub vars: usize,
}

pub fn var(id: usize) -> Var {
    Var::named(id, &format!("X{}", id))
}

impl Gen {
    pub fn new(seed: u64, vars: usize) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            vars,
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A first-order term of depth at most `depth` over a small signature:
    /// constants `a b c`, integers 0..3, and `f/1 g/2 h/3`.
    pub fn term(&mut self, depth: u32) -> Term {
        let leaf = depth == 0 || self.chance(0.35);
        if leaf {
            return match self.below(3) {
                0 => Term::Var(var(self.below(self.vars))),
                1 => Term::atom(["a", "b", "c"][self.below(3)]),
                _ => {
                    if self.chance(0.5) {
                        Term::Var(var(self.below(self.vars)))
                    } else {
                        Term::Int(self.below(3) as i64)
                    }
                }
            };
        }
        let (name, arity) = [("f", 1), ("g", 2), ("h", 3)][self.below(3)];
        let args = (0..arity).map(|_| self.term(depth - 1)).collect();
        Term::compound(name, args)
    }

    /// A pair built to unify often: the second term is the first with some
    /// subterms replaced by variables or random terms.
    pub fn pair(&mut self, depth: u32) -> (Term, Term) {
        let left = self.term(depth);
        let right = if self.chance(0.5) {
            self.perturb(&left)
        } else {
            self.term(depth)
        };
        (left, right)
    }

    fn perturb(&mut self, t: &Term) -> Term {
        match self.below(6) {
            0 => Term::Var(var(self.below(self.vars))),
            1 => self.term(1),
            _ => match t {
                Term::Compound(c) => {
                    let args = c.args().iter().map(|a| self.perturb(a)).collect();
                    Term::from_parts(c.functor().clone(), args)
                }
                other => other.clone(),
            },
        }
    }

    /// An idempotent-agnostic substitution over the variable pool; some
    /// variables are left out, none maps to itself.
    pub fn subst(&mut self, depth: u32) -> Substitution {
        let mut s = Substitution::new();
        for id in 0..self.vars {
            if self.chance(0.5) {
                let t = self.term(depth);
                s.insert(var(id), t);
            }
        }
        s
    }

    pub fn int_list(&mut self, max_len: usize, range: i64) -> Vec<i64> {
        let len = self.below(max_len + 1);
        (0..len).map(|_| self.rng.gen_range(-range..=range)).collect()
    }

    /// A term exercising the writer: operators at several priorities,
    /// lists, negative and float numbers, atoms needing quotes, braces.
    pub fn rich_term(&mut self, depth: u32) -> Term {
        if depth == 0 || self.chance(0.3) {
            return self.rich_leaf();
        }
        let d = depth - 1;
        match self.below(9) {
            0 | 1 => {
                let op = *[
                    "+", "-", "*", "/", "=", "<", "=..", "is", ",", ";", "->", ":-", "//", "mod",
                    "^", "=:=", "\\=",
                ]
                .choose(&mut self.rng)
                .unwrap();
                Term::compound(op, vec![self.rich_term(d), self.rich_term(d)])
            }
            2 => {
                let op = *["-", "+", "\\+", ":-", "?-"].choose(&mut self.rng).unwrap();
                Term::compound(op, vec![self.rich_term(d)])
            }
            3 | 4 => {
                let n = self.below(4);
                let items = (0..n).map(|_| self.rich_term(d)).collect();
                if self.chance(0.3) {
                    let tail = self.rich_term(d);
                    Term::list_with_tail(items, tail)
                } else {
                    Term::list(items)
                }
            }
            5 => Term::compound("{}", vec![self.rich_term(d)]),
            _ => {
                let name = self.rich_atom_name();
                let n = 1 + self.below(3);
                let args = (0..n).map(|_| self.rich_term(d)).collect();
                Term::compound(name, args)
            }
        }
    }

    fn rich_atom_name(&mut self) -> &'static str {
        [
            "f", "g", "foo_bar", "Abc", "hello world", "it's", "[]", "{}", "+", "-", "*", ",", "|",
            ";", "!", "a\\b", "", "=..", "é",
        ]
        .choose(&mut self.rng)
        .copied()
        .unwrap()
    }

    fn rich_leaf(&mut self) -> Term {
        match self.below(5) {
            0 => Term::Var(var(self.below(self.vars))),
            1 => Term::Int(self.rng.gen_range(-20..=20)),
            2 => {
                let x: f64 = self.rng.gen_range(-8..=8) as f64 * 0.25;
                Term::Float(x)
            }
            _ => Term::atom(self.rich_atom_name()),
        }
    }
}

/// A pure query over append/member/sublist with a random mix of bound and
/// unbound arguments.
pub fn pure_query(g: &mut Gen) -> String {
    let elems = ["a", "b", "c"];
    let list = |g: &mut Gen, open: bool| -> String {
        let n = g.below(4);
        let items: Vec<String> = (0..n)
            .map(|i| {
                if g.chance(0.25) {
                    format!("E{}", i)
                } else {
                    elems[g.below(3)].to_string()
                }
            })
            .collect();
        if open && g.chance(0.3) {
            if items.is_empty() {
                "T".to_string()
            } else {
                format!("[{}|T]", items.join(","))
            }
        } else {
            format!("[{}]", items.join(","))
        }
    };
    let arg = |g: &mut Gen, name: &str| -> String {
        if g.chance(0.4) {
            name.to_string()
        } else {
            list(g, true)
        }
    };
    match g.below(4) {
        0 => {
            let a = arg(g, "Xs");
            let b = arg(g, "Ys");
            let c = arg(g, "Zs");
            format!("append({}, {}, {})", a, b, c)
        }
        1 => {
            let x = if g.chance(0.5) {
                "X".to_string()
            } else {
                elems[g.below(3)].to_string()
            };
            let l = list(g, false);
            format!("member({}, {})", x, l)
        }
        2 => {
            let a = arg(g, "Xs");
            let b = list(g, false);
            format!("sublist({}, {})", a, b)
        }
        _ => {
            let l = list(g, false);
            let a = arg(g, "Xs");
            format!("append({}, Ys, {}), member(X, Ys)", a, l)
        }
    }
}
