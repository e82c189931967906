use std::collections::HashMap;

use crate::terms::{atoms, Atom, Term, VarId};

use super::lexer::{is_alnum, is_symbol_char};
use super::ops::{OpType, OperatorTable, MAX_PRIORITY};

/// Renders terms as source text. Unnamed variables get `_A`, `_B`, ... in
/// order of first appearance; one writer keeps the naming stable across calls.
pub struct TermWriter<'a> {
    ops: &'a OperatorTable,
    quoted: bool,
    anonymous: HashMap<VarId, String>,
}

fn letter_name(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    format!("_{}", String::from_utf8(out).expect("ascii"))
}

fn is_solo(name: &str) -> bool {
    matches!(name, "!" | ";" | "[]" | "{}")
}

fn is_letter_atom(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_lowercase()) && chars.all(is_alnum)
}

fn is_symbol_atom(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_symbol_char)
}

/// Whether the atom can be written without quotes and read back unchanged.
pub fn atom_needs_quotes(name: &str) -> bool {
    !(is_solo(name) || is_letter_atom(name) || (is_symbol_atom(name) && name != "."))
}

fn quote_atom(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('\'');
    for c in name.chars() {
        match c {
            '\'' => out.push_str("''"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

fn format_float(x: f64) -> String {
    let s = format!("{:?}", x);
    if s.contains(['.', 'e', 'n', 'i']) {
        s
    } else {
        format!("{}.0", s)
    }
}

fn starts_with_symbol(text: &str) -> bool {
    text.chars().next().is_some_and(is_symbol_char)
}

fn ends_with_symbol(text: &str) -> bool {
    text.chars().next_back().is_some_and(is_symbol_char)
}

impl<'a> TermWriter<'a> {
    pub fn new(ops: &'a OperatorTable, quoted: bool) -> TermWriter<'a> {
        TermWriter {
            ops,
            quoted,
            anonymous: HashMap::new(),
        }
    }

    pub fn write(&mut self, term: &Term) -> String {
        let mut out = String::new();
        self.write_at(term, MAX_PRIORITY, &mut out);
        out
    }

    /// Writes `term` as an operand whose priority may not exceed `max`,
    /// bracketing it otherwise. Answers use 699, the right side of `=`.
    pub fn write_bounded(&mut self, term: &Term, max: u16) -> String {
        self.write_operand(term, max)
    }

    fn atom_text(&self, atom: &Atom) -> String {
        let name = atom.as_str();
        if self.quoted && atom_needs_quotes(name) {
            quote_atom(name)
        } else {
            name.to_string()
        }
    }

    fn var_text(&mut self, id: VarId, name: Option<&str>) -> String {
        if let Some(n) = name {
            return n.to_string();
        }
        let next = self.anonymous.len();
        self.anonymous
            .entry(id)
            .or_insert_with(|| letter_name(next))
            .clone()
    }

    /// An atom standing alone as an operand of an operator.
    fn operand_atom(&self, atom: &Atom) -> String {
        let text = self.atom_text(atom);
        if self.ops.is_operator(atom.as_str()) {
            format!("({})", text)
        } else {
            text
        }
    }

    fn write_operand(&mut self, term: &Term, max: u16) -> String {
        match term {
            Term::Atom(a) => self.operand_atom(a),
            _ => {
                let mut s = String::new();
                self.write_at(term, max, &mut s);
                s
            }
        }
    }

    fn write_at(&mut self, term: &Term, max: u16, out: &mut String) {
        match term {
            Term::Var(v) => {
                let text = self.var_text(v.id(), v.name());
                out.push_str(&text);
            }
            Term::Int(n) => out.push_str(&n.to_string()),
            Term::Float(x) => out.push_str(&format_float(*x)),
            Term::Atom(a) => out.push_str(&self.atom_text(a)),
            Term::Compound(c) => {
                let name = c.functor().as_str();
                let args = c.args();
                if c.functor() == &atoms::dot() && args.len() == 2 {
                    self.write_list(term, out);
                    return;
                }
                if c.functor() == &atoms::curly() && args.len() == 1 {
                    out.push('{');
                    self.write_at(&args[0], MAX_PRIORITY, out);
                    out.push('}');
                    return;
                }
                if args.len() == 2 {
                    if let Some(def) = self.ops.infix(name) {
                        let (lmax, rmax) = def.arg_limits();
                        let left = self.write_operand(&args[0], lmax);
                        let right = self.write_operand(&args[1], rmax);
                        let op = self.atom_text(c.functor());
                        let text = if name == "," || name == ";" {
                            format!("{}{}{}", left, name, right)
                        } else if !is_symbol_atom(name) {
                            format!("{} {} {}", left, op, right)
                        } else {
                            let lsep = if ends_with_symbol(&left) { " " } else { "" };
                            let rsep = if starts_with_symbol(&right) { " " } else { "" };
                            format!("{}{}{}{}{}", left, lsep, op, rsep, right)
                        };
                        push_bracketed(out, &text, def.priority > max);
                        return;
                    }
                }
                if args.len() == 1 {
                    if let Some(def) = self.ops.prefix(name) {
                        let arg = &args[0];
                        let operand_is_op_atom =
                            matches!(arg, Term::Atom(a) if self.ops.is_operator(a.as_str()));
                        if !(arg.is_number() && name == "-" || operand_is_op_atom) {
                            let amax = match def.kind {
                                OpType::Fy => def.priority,
                                _ => def.priority - 1,
                            };
                            let operand = self.write_operand(arg, amax);
                            let op = self.atom_text(c.functor());
                            let sep = if !is_symbol_atom(name)
                                || starts_with_symbol(&operand)
                                || operand.starts_with('(')
                                || arg.is_number()
                            {
                                " "
                            } else {
                                ""
                            };
                            let text = format!("{}{}{}", op, sep, operand);
                            push_bracketed(out, &text, def.priority > max);
                            return;
                        }
                    }
                    if let Some(def) = self.ops.postfix(name) {
                        let (amax, _) = def.arg_limits();
                        let operand = self.write_operand(&args[0], amax);
                        let op = self.atom_text(c.functor());
                        let sep = if ends_with_symbol(&operand) && is_symbol_atom(name) {
                            " "
                        } else {
                            ""
                        };
                        let text = format!("{}{}{}", operand, sep, op);
                        push_bracketed(out, &text, def.priority > max);
                        return;
                    }
                }
                out.push_str(&self.atom_text(c.functor()));
                out.push('(');
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write_at(arg, 999, out);
                }
                out.push(')');
            }
        }
    }

    fn write_list(&mut self, term: &Term, out: &mut String) {
        out.push('[');
        let mut cur = term;
        let mut first = true;
        loop {
            match cur {
                Term::Compound(c) if c.functor() == &atoms::dot() && c.arity() == 2 => {
                    if !first {
                        out.push(',');
                    }
                    first = false;
                    self.write_at(&c.args()[0], 999, out);
                    cur = &c.args()[1];
                }
                Term::Atom(a) if a == &atoms::nil() => break,
                tail => {
                    out.push('|');
                    self.write_at(tail, 999, out);
                    break;
                }
            }
        }
        out.push(']');
    }
}

fn push_bracketed(out: &mut String, text: &str, bracket: bool) {
    if bracket {
        out.push('(');
        out.push_str(text);
        out.push(')');
    } else {
        out.push_str(text);
    }
}

/// Writes `t` using `table` for operator syntax. With `quoted`, atoms that
/// would not read back as themselves are quoted.
pub fn write_term(t: &Term, table: &OperatorTable, quoted: bool) -> String {
    TermWriter::new(table, quoted).write(t)
}
