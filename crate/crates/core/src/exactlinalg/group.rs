use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// A finitely generated abelian group `Z/d1 + Z/d2 + ... + Z^r`.
///
/// Factors form a divisibility chain; free summands are encoded as `0` and
/// come last, and no factor equals 1.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    factors: Vec<Int>,
    presentation: Option<(usize, IntMatrix)>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FgAbGroup {}

impl FgAbGroup {
    pub fn zero() -> Self {
        FgAbGroup { factors: Vec::new(), presentation: None }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { factors: vec![Int::zero(); rank], presentation: None }
    }

    /// `Z/n`, or `Z` for `n = 0`.
    pub fn cyclic(n: impl Into<Int>) -> Self {
        Self::from_orders([n.into()])
    }

    /// The direct sum of cyclic groups of the given orders (0 meaning `Z`).
    /// Orders need not form a chain; the canonical form is computed.
    pub fn from_orders(orders: impl IntoIterator<Item = Int>) -> Self {
        let mut free = 0;
        let mut torsion: Vec<Int> = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free += 1;
            } else if !o.is_one() {
                torsion.push(o);
            }
        }
        let mut factors = canonical_chain(torsion);
        factors.extend(std::iter::repeat_n(Int::zero(), free));
        FgAbGroup { factors, presentation: None }
    }

    /// Parses an invariant-factor list, rejecting broken chains and units.
    pub fn from_invariant_factors(factors: Vec<Int>) -> Option<Self> {
        let mut seen_zero = false;
        for (i, f) in factors.iter().enumerate() {
            if f.is_negative() || f.is_one() {
                return None;
            }
            if f.is_zero() {
                seen_zero = true;
            } else if seen_zero || (i > 0 && !f.is_multiple_of(&factors[i - 1])) {
                return None;
            }
        }
        Some(FgAbGroup { factors, presentation: None })
    }

    pub(crate) fn from_presentation_diagonal(generators: usize, diag: &[Int], relations: IntMatrix) -> Self {
        let nonzero: Vec<Int> = diag.iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
        let free = generators - nonzero.len();
        let mut g = Self::from_orders(nonzero.into_iter().chain(std::iter::repeat_n(Int::zero(), free)));
        g.presentation = Some((generators, relations));
        g
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.factors
    }

    /// Generator count and relation matrix (columns are relations) when known.
    pub fn presentation(&self) -> Option<&(usize, IntMatrix)> {
        self.presentation.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<Int> {
        self.factors.iter().filter(|f| !f.is_zero()).cloned().collect()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        if self.rank() > 0 {
            return None;
        }
        Some(self.factors.iter().fold(Int::one(), |a, b| a * b))
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        Self::from_orders(self.factors.iter().chain(&other.factors).cloned())
    }
}

/// Turns arbitrary positive orders into the invariant-factor chain via the
/// prime-power decomposition of each order.
fn canonical_chain(orders: Vec<Int>) -> Vec<Int> {
    let mut primes: Vec<(Int, Vec<Int>)> = Vec::new();
    for o in orders {
        for (p, pk) in prime_power_parts(o) {
            match primes.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(pk),
                None => primes.push((p, vec![pk])),
            }
        }
    }
    let len = primes.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![Int::one(); len];
    for (_, mut powers) in primes {
        powers.sort();
        let offset = len - powers.len();
        for (i, pk) in powers.into_iter().enumerate() {
            out[offset + i] *= pk;
        }
    }
    out
}

fn prime_power_parts(mut n: Int) -> Vec<(Int, Int)> {
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut pk = Int::one();
            while n.is_multiple_of(&p) {
                n /= &p;
                pk *= &p;
            }
            out.push((p.clone(), pk));
        }
        p += 1;
    }
    if n > Int::one() {
        out.push((n.clone(), n));
    }
    out
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn chain_normalisation() {
        let g = FgAbGroup::from_orders(iv(&[6, 4, 0, 1]));
        assert_eq!(g.invariant_factors(), &iv(&[2, 12, 0]));
        assert_eq!(g.to_string(), "Z/2 + Z/12 + Z");
        assert_eq!(FgAbGroup::cyclic(1), FgAbGroup::zero());
    }

    #[test]
    fn parsing() {
        assert!(FgAbGroup::from_invariant_factors(iv(&[2, 4, 0])).is_some());
        assert!(FgAbGroup::from_invariant_factors(iv(&[2, 3])).is_none());
        assert!(FgAbGroup::from_invariant_factors(iv(&[0, 2])).is_none());
        assert!(FgAbGroup::from_invariant_factors(iv(&[1])).is_none());
    }

    #[test]
    fn sums() {
        let g = FgAbGroup::cyclic(2).direct_sum(&FgAbGroup::cyclic(3)).direct_sum(&FgAbGroup::free(1));
        assert_eq!(g.invariant_factors(), &iv(&[6, 0]));
        assert_eq!(g.rank(), 1);
        assert_eq!(FgAbGroup::cyclic(4).order(), Some(Int::from(4)));
    }
}
