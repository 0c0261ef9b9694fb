use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::monomial::Monomial;

/// Monomial orders used by the algorithms.
///
/// `Block { elim }` compares the variables in `elim` first by degrevlex and breaks
/// ties by degrevlex on the remaining variables, so any monomial involving an
/// eliminated variable beats every monomial free of them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    Block { elim: u64 },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (x, y) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Lex => x.cmp(y),
            MonomialOrder::DegRevLex => {
                let (da, db) = (a.degree(), b.degree());
                da.cmp(&db).then_with(|| revlex(x, y, u64::MAX))
            }
            MonomialOrder::Block { elim } => {
                let (ea, eb) = (a.degree_in(elim), b.degree_in(elim));
                ea.cmp(&eb)
                    .then_with(|| revlex(x, y, elim))
                    .then_with(|| a.degree_in(!elim).cmp(&b.degree_in(!elim)))
                    .then_with(|| revlex(x, y, !elim))
            }
        }
    }

    /// Elimination order for the variables of `elim`.
    pub fn eliminating(elim: u64) -> Self {
        MonomialOrder::Block { elim }
    }
}

/// Reverse-lex tie break restricted to the variables in `mask`: the monomial with
/// the smaller exponent at the last differing variable is the larger one.
fn revlex(x: &[u16], y: &[u16], mask: u64) -> Ordering {
    for i in (0..x.len()).rev() {
        if mask >> i & 1 == 0 {
            continue;
        }
        match x[i].cmp(&y[i]) {
            Ordering::Equal => continue,
            other => return other.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_degree_two_chain() {
        // x1^2 > x1*x2 > x2^2 by definition of degrevlex with x1 > x2.
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn block_puts_fiber_above_base() {
        // ring (b, x): x beats b^2 under the fiber elimination order
        let o = MonomialOrder::Block { elim: 0b10 };
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[2, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[3, 1]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[1, 1])), Ordering::Equal);
    }

    #[test]
    fn degrevlex_differs_from_deglex_in_three_vars() {
        // deglex would put x1*x3 first; degrevlex prefers x2^2
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
    }
}
