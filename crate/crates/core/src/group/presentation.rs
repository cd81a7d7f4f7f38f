use std::fmt;


use crate::error::{Error, Result};
use crate::groupoid::Letter;

/// A word in the generators; letters are applied right to left.
pub type Word = Vec<Letter>;

/// Free reduction: cancels adjacent `s s⁻¹` pairs.
pub fn freely_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        match out.last() {
            Some(&last) if last.generator == l.generator && last.inverse != l.inverse => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g.contains(char::is_whitespace) || g.contains('^') {
                return Err(Error::input(format!("invalid generator symbol {g:?}")));
            }
            if generators[..i].contains(g) {
                return Err(Error::input(format!("generator {g} repeated")));
            }
        }
        for r in &relators {
            if r.is_empty() {
                return Err(Error::input("relators must be nonempty"));
            }
            if freely_reduce(r).len() != r.len() {
                return Err(Error::input("relators must be freely reduced"));
            }
            if r.iter().any(|l| l.generator >= generators.len()) {
                return Err(Error::input("relator uses an unknown generator"));
            }
        }
        Ok(GroupPresentation {
            generators,
            relators,
        })
    }

    /// The free group on the given symbols.
    pub fn free(generators: &[&str]) -> Result<Self> {
        Self::new(generators.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    /// Free group on `a, b, c, …` (then `x1, x2, …` past 26).
    pub fn free_of_rank(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| {
                if rank <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        Self::new(gens, Vec::new()).expect("distinct symbols")
    }

    /// Parses relators written as whitespace-separated tokens `s`, `s^-1`
    /// or `s^k`; each is freely reduced.
    pub fn parse(generators: Vec<String>, relators: &[String]) -> Result<Self> {
        let mut words = Vec::new();
        for r in relators {
            let w = parse_word(&generators, r)?;
            let reduced = freely_reduce(&w);
            if reduced.is_empty() {
                return Err(Error::input(format!("relator {r:?} reduces to the identity")));
            }
            words.push(reduced);
        }
        Self::new(generators, words)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|l| {
                let s = &self.generators[l.generator];
                if l.inverse {
                    format!("{s}^-1")
                } else {
                    s.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn parse_word(generators: &[String], text: &str) -> Result<Word> {
    let mut w = Vec::new();
    for tok in text.split_whitespace() {
        let (sym, exp) = match tok.split_once('^') {
            Some((s, e)) => (
                s,
                e.parse::<i64>()
                    .map_err(|_| Error::parse(tok, "bad exponent"))?,
            ),
            None => (tok, 1),
        };
        let g = generators
            .iter()
            .position(|x| x == sym)
            .ok_or_else(|| Error::parse(tok, format!("unknown generator {sym:?}")))?;
        for _ in 0..exp.unsigned_abs() {
            w.push(Letter {
                generator: g,
                inverse: exp < 0,
            });
        }
    }
    Ok(w)
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<_> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        let gens = vec!["a".to_string(), "b".to_string()];
        let p = GroupPresentation::parse(gens.clone(), &["a b a^-1 b^-1".into()]).unwrap();
        assert_eq!(p.relators()[0].len(), 4);
        assert_eq!(p.format_word(&p.relators()[0]), "a b a^-1 b^-1");
        let z2 = GroupPresentation::parse(vec!["a".into()], &["a^2".into()]).unwrap();
        assert_eq!(z2.relators()[0].len(), 2);
        assert!(GroupPresentation::parse(gens.clone(), &["a a^-1".into()]).is_err());
        assert!(GroupPresentation::parse(gens, &["c".into()]).is_err());
        assert!(GroupPresentation::free(&["a", "a"]).is_err());
    }

    #[test]
    fn reduction() {
        let a = Letter { generator: 0, inverse: false };
        let ai = Letter { generator: 0, inverse: true };
        let b = Letter { generator: 1, inverse: false };
        assert_eq!(freely_reduce(&[a, b, ai, a, ai]), vec![a, b, ai]);
        assert!(freely_reduce(&[a, ai]).is_empty());
    }
}
