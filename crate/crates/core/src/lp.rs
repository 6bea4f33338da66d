//! Exact PMAS existence test for small games.
//!
//! One unknown `x_{S,i}` per non-empty coalition `S` and member `i`;
//! per-coalition efficiency equalities; monotonicity on cover pairs
//! `(S, S ∪ {j})`; non-negativity. Feasibility is decided by a phase-one
//! primal simplex over exact rationals, so the answer is
//! a certificate rather than a tolerance call.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::GameTable;
use crate::graph::Coalition;
use crate::pmas::{coalition_offsets, TabulatedScheme};
use crate::Rational;

/// Largest player count accepted by the oracle.
pub const LP_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A PMAS exists; the witness assigns every `x_{S,i}`.
    Feasible(TabulatedScheme),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// The PMAS linear system of a cooperative game.
#[derive(Debug, Clone)]
pub struct PmasLp {
    players: usize,
    offsets: Vec<usize>,
    /// `(S, γ(S))` for every non-empty `S`.
    efficiency: Vec<(Coalition, i64)>,
    /// `(k, l)` meaning `x_k - x_l <= 0`.
    monotonicity: Vec<(usize, usize)>,
}

impl PmasLp {
    pub fn new(players: usize, value: impl Fn(Coalition) -> i64) -> Result<Self> {
        if players > LP_LIMIT {
            return Err(Error::size("PMAS linear program", LP_LIMIT, players));
        }
        let offsets = coalition_offsets(players);
        let var = |s: Coalition, i: usize| offsets[s.bits() as usize] + s.rank(i);
        let full = Coalition::full(players);
        let mut efficiency = Vec::with_capacity((1 << players) - 1);
        let mut monotonicity = Vec::new();
        for bits in 1u64..1 << players {
            let s = Coalition::from_bits(bits);
            efficiency.push((s, value(s)));
            for j in Coalition::from_bits(full.bits() & !bits).iter() {
                let t = s.with(j);
                for i in s.iter() {
                    monotonicity.push((var(s, i), var(t, i)));
                }
            }
        }
        Ok(PmasLp {
            players,
            offsets,
            efficiency,
            monotonicity,
        })
    }

    pub fn variable_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn equality_count(&self) -> usize {
        self.efficiency.len()
    }

    pub fn inequality_count(&self) -> usize {
        self.monotonicity.len()
    }

    pub fn solve(&self) -> Result<Feasibility> {
        // Machine-word rationals first; exact big rationals if any entry
        // outgrows them.
        match self.solve_in::<Small>() {
            Ok(answer) => answer,
            Err(Overflow) => self.solve_in::<Rational>().unwrap_or_else(|_| {
                Err(Error::Internal("big rational arithmetic overflowed".into()))
            }),
        }
    }

    fn solve_in<T: Scalar>(&self) -> Result<Result<Feasibility>, Overflow> {
        let nv = self.variable_count();
        let nm = self.monotonicity.len();
        let ne = self.efficiency.len();
        let one = T::from_i64(1);
        let minus_one = T::from_i64(-1);

        let mut rows = Vec::with_capacity(ne + nm);
        let mut rhs = Vec::with_capacity(ne + nm);
        let mut basis = Vec::with_capacity(ne + nm);
        let mut cost = vec![T::from_i64(0); nv + nm + ne];
        let mut objective = T::from_i64(0);

        // Efficiency rows start on artificials; phase one minimises their sum.
        for (k, &(s, value)) in self.efficiency.iter().enumerate() {
            // Rows with negative worth are negated so the artificial starts
            // feasible.
            let sign = if value < 0 { -1 } else { 1 };
            let start = self.offsets[s.bits() as usize];
            let mut row = Vec::with_capacity(s.len() + 1);
            for (c, reduced) in cost.iter_mut().enumerate().skip(start).take(s.len()) {
                row.push((c, T::from_i64(sign)));
                *reduced = reduced.sub(&T::from_i64(sign))?;
            }
            row.push((nv + nm + k, one.clone()));
            let b = T::from_i64(value.abs());
            objective = objective.add(&b)?;
            rows.push(row);
            rhs.push(b);
            basis.push(nv + nm + k);
        }
        for (m, &(k, l)) in self.monotonicity.iter().enumerate() {
            let mut row = vec![
                (k, one.clone()),
                (l, minus_one.clone()),
                (nv + m, one.clone()),
            ];
            row.sort_by_key(|&(c, _)| c);
            rows.push(row);
            rhs.push(T::from_i64(0));
            basis.push(nv + m);
        }

        let mut tableau = Tableau {
            rows,
            rhs,
            basis,
            cost,
            objective,
            first_slack: nv,
        };
        if let Err(e) = tableau.run()? {
            return Ok(Err(e));
        }
        if !tableau.objective.is_zero() {
            return Ok(Ok(Feasibility::Infeasible));
        }
        let mut scheme = TabulatedScheme::zeros(self.players);
        let values = scheme.values_mut();
        for (r, &b) in tableau.basis.iter().enumerate() {
            if b < nv {
                values[b] = tableau.rhs[r].to_rational();
            }
        }
        Ok(Ok(Feasibility::Feasible(scheme)))
    }
}

/// An intermediate result did not fit the scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Overflow;

type Checked<T> = std::result::Result<T, Overflow>;

/// Exact field arithmetic that may refuse an operation.
trait Scalar: Clone + Ord + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> Ordering;
    fn add(&self, o: &Self) -> Checked<Self>;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn div(&self, o: &Self) -> Checked<Self>;
    fn to_rational(&self) -> Rational;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        self.numer().sign().cmp(&num_bigint::Sign::NoSign)
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Checked<Self> {
        Ok(self / o)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Reduced fraction with a positive denominator in machine words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Small {
    num: i64,
    den: i64,
}

fn gcd(a: u128, b: u128) -> u128 {
    match (u64::try_from(a), u64::try_from(b)) {
        (Ok(a), Ok(b)) => binary_gcd(a, b) as u128,
        _ => {
            let (mut a, mut b) = (a, b);
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        }
    }
}

fn binary_gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a | b;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Small {
    fn reduce(num: i128, den: i128) -> Checked<Small> {
        if den == 0 {
            return Err(Overflow);
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Ok(Small {
            num: num.try_into().map_err(|_| Overflow)?,
            den: den.try_into().map_err(|_| Overflow)?,
        })
    }
}

impl Ord for Small {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Small {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Scalar for Small {
    fn from_i64(v: i64) -> Self {
        Small { num: v, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    fn signum(&self) -> Ordering {
        self.num.cmp(&0)
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        if self.den == 1 && o.den == 1 {
            return Ok(Small::from_i64(
                self.num.checked_add(o.num).ok_or(Overflow)?,
            ));
        }
        if self.den == o.den {
            return Small::reduce(self.num as i128 + o.num as i128, self.den as i128);
        }
        let (a, b, c, d) = (
            self.num as i128,
            self.den as i128,
            o.num as i128,
            o.den as i128,
        );
        let top = a.checked_mul(d).zip(c.checked_mul(b)).ok_or(Overflow)?;
        Small::reduce(top.0.checked_add(top.1).ok_or(Overflow)?, b * d)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        self.add(&Small {
            num: o.num.checked_neg().ok_or(Overflow)?,
            den: o.den,
        })
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        if self.den == 1 && o.den == 1 {
            return Ok(Small::from_i64(
                self.num.checked_mul(o.num).ok_or(Overflow)?,
            ));
        }
        Small::reduce(
            self.num as i128 * o.num as i128,
            self.den as i128 * o.den as i128,
        )
    }
    fn div(&self, o: &Self) -> Checked<Self> {
        Small::reduce(
            self.num as i128 * o.den as i128,
            self.den as i128 * o.num as i128,
        )
    }
    fn to_rational(&self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }
}

struct Tableau<T> {
    /// Sparse rows sorted by column.
    rows: Vec<Vec<(usize, T)>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs.
    cost: Vec<T>,
    objective: T,
    /// Columns from here on formed the starting identity basis.
    first_slack: usize,
}

fn coefficient<T>(row: &[(usize, T)], col: usize) -> Option<&T> {
    row.binary_search_by_key(&col, |&(c, _)| c)
        .ok()
        .map(|k| &row[k].1)
}

/// `row - factor * pivot`, dropping zeros.
fn eliminate<T: Scalar>(
    row: &[(usize, T)],
    pivot: &[(usize, T)],
    factor: &T,
) -> Checked<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    let zero = T::from_i64(0);
    while a < row.len() || b < pivot.len() {
        let order = match (row.get(a), pivot.get(b)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match order {
            Ordering::Less => {
                out.push(row[a].clone());
                a += 1;
            }
            Ordering::Greater => {
                out.push((pivot[b].0, zero.sub(&factor.mul(&pivot[b].1)?)?));
                b += 1;
            }
            Ordering::Equal => {
                let v = row[a].1.sub(&factor.mul(&pivot[b].1)?)?;
                if !v.is_zero() {
                    out.push((row[a].0, v));
                }
                a += 1;
                b += 1;
            }
        }
    }
    Ok(out)
}

impl<T: Scalar> Tableau<T> {
    /// Dantzig pricing with the lexicographic ratio test, which rules out
    /// cycling on the many degenerate monotonicity rows.
    fn run(&mut self) -> Checked<Result<()>> {
        loop {
            let mut col: Option<usize> = None;
            for (j, d) in self.cost.iter().enumerate() {
                if d.signum() == Ordering::Less && col.is_none_or(|b| d < &self.cost[b]) {
                    col = Some(j);
                }
            }
            let Some(col) = col else {
                return Ok(Ok(()));
            };
            let mut best: Option<usize> = None;
            for r in 0..self.rows.len() {
                let Some(a) = coefficient(&self.rows[r], col) else {
                    continue;
                };
                if a.signum() != Ordering::Greater {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(p) => self.lex_less(r, p, col)?,
                };
                if better {
                    best = Some(r);
                }
            }
            let Some(p) = best else {
                return Ok(Err(Error::Internal(
                    "phase-one objective is unbounded".into(),
                )));
            };
            self.pivot(p, col)?;
        }
    }

    /// Whether row `r` beats row `p` in the lexicographic ratio test on
    /// column `col`: compares `(rhs, B⁻¹ row) / a` with the starting-basis
    /// columns standing in for `B⁻¹`.
    fn lex_less(&self, r: usize, p: usize, col: usize) -> Checked<bool> {
        let a = coefficient(&self.rows[r], col).expect("entry");
        let b = coefficient(&self.rows[p], col).expect("entry");
        // x / a < y / b  ⇔  x b < y a  for positive a, b.
        let less = |x: &T, y: &T| -> Checked<Ordering> { Ok(x.mul(b)?.cmp(&y.mul(a)?)) };
        match less(&self.rhs[r], &self.rhs[p])? {
            Ordering::Less => return Ok(true),
            Ordering::Greater => return Ok(false),
            Ordering::Equal => {}
        }
        let zero = T::from_i64(0);
        let tail = |row: &[(usize, T)]| row.partition_point(|&(c, _)| c < self.first_slack);
        let (u, v) = (&self.rows[r], &self.rows[p]);
        let (mut i, mut j) = (tail(u), tail(v));
        while i < u.len() || j < v.len() {
            let cu = u.get(i).map_or(usize::MAX, |e| e.0);
            let cv = v.get(j).map_or(usize::MAX, |e| e.0);
            let (x, y) = match cu.cmp(&cv) {
                Ordering::Less => {
                    i += 1;
                    (&u[i - 1].1, &zero)
                }
                Ordering::Greater => {
                    j += 1;
                    (&zero, &v[j - 1].1)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (&u[i - 1].1, &v[j - 1].1)
                }
            };
            match less(x, y)? {
                Ordering::Less => return Ok(true),
                Ordering::Greater => return Ok(false),
                Ordering::Equal => {}
            }
        }
        // Rows of B⁻¹ are independent, so distinct rows never tie.
        Ok(false)
    }

    fn pivot(&mut self, p: usize, col: usize) -> Checked<()> {
        let a = coefficient(&self.rows[p], col)
            .cloned()
            .expect("pivot entry");
        let pivot_row = std::mem::take(&mut self.rows[p])
            .into_iter()
            .map(|(c, v)| Ok((c, v.div(&a)?)))
            .collect::<Checked<Vec<_>>>()?;
        self.rhs[p] = self.rhs[p].div(&a)?;
        let pivot_rhs = self.rhs[p].clone();

        for r in 0..self.rows.len() {
            if r == p {
                continue;
            }
            let Some(f) = coefficient(&self.rows[r], col).cloned() else {
                continue;
            };
            self.rows[r] = eliminate(&self.rows[r], &pivot_row, &f)?;
            self.rhs[r] = self.rhs[r].sub(&f.mul(&pivot_rhs)?)?;
        }

        let d = self.cost[col].clone();
        for (c, v) in &pivot_row {
            self.cost[*c] = self.cost[*c].sub(&d.mul(v)?)?;
        }
        self.objective = self.objective.add(&d.mul(&pivot_rhs)?)?;
        self.rows[p] = pivot_row;
        self.basis[p] = col;
        Ok(())
    }
}

/// Decides whether the game admits a population monotonic allocation
/// scheme.
pub fn pmas_feasible(game: &GameTable) -> Result<Feasibility> {
    let players = game.players();
    if players > LP_LIMIT {
        return Err(Error::size("PMAS linear program", LP_LIMIT, players));
    }
    PmasLp::new(players, |s| game.value(s) as i64)?.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::pmas::{verify_scheme, AllocationScheme, VerificationMode};

    #[test]
    fn k2_is_feasible() {
        let g = parse_graph("a b").unwrap();
        let Feasibility::Feasible(w) = pmas_feasible(&GameTable::new(&g)).unwrap() else {
            panic!("K2 admits a PMAS");
        };
        assert_eq!(
            w.payoff(Coalition::singleton(0), 0),
            Rational::from_integer(1.into())
        );
    }

    #[test]
    fn triangle_is_infeasible() {
        let g = parse_graph("a b\nb c\nc a").unwrap();
        assert_eq!(
            pmas_feasible(&GameTable::new(&g)).unwrap(),
            Feasibility::Infeasible
        );
    }

    #[test]
    fn witness_passes_verification() {
        let g = parse_graph("a b\nb c\nc d\nd e\nc f").unwrap();
        let Feasibility::Feasible(w) = pmas_feasible(&GameTable::new(&g)).unwrap() else {
            panic!("expected feasible");
        };
        assert!(verify_scheme(&g, &w, VerificationMode::Exhaustive)
            .unwrap()
            .is_pmas());
    }

    #[test]
    fn system_dimensions() {
        for n in 1..=6 {
            let lp = PmasLp::new(n, |s| s.len() as i64).unwrap();
            assert_eq!(lp.variable_count(), n << (n - 1));
            assert_eq!(lp.equality_count(), (1 << n) - 1);
            // Σ_S |S|(n - |S|) = n(n-1)2^(n-2)
            let cover = if n >= 2 { (n * (n - 1)) << (n - 2) } else { 0 };
            assert_eq!(lp.inequality_count(), cover);
        }
    }

    #[test]
    fn generic_games() {
        // Additive game: always a PMAS.
        let lp = PmasLp::new(3, |s| s.len() as i64).unwrap();
        assert!(lp.solve().unwrap().is_feasible());
        // Two players, each worth 1 alone, together 1: monotonicity forces
        // x_{N,i} >= 1 for both, breaking efficiency.
        let lp = PmasLp::new(2, |s| if s.is_empty() { 0 } else { 1 }).unwrap();
        assert_eq!(lp.solve().unwrap(), Feasibility::Infeasible);
        // Negative worth is infeasible with non-negative payoffs.
        let lp = PmasLp::new(1, |_| -1).unwrap();
        assert_eq!(lp.solve().unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn small_rationals_agree_with_big_ones() {
        let samples = [
            (0, 1),
            (1, 1),
            (-3, 4),
            (5, 6),
            (7, -9),
            (i64::MAX, 3),
            (-12, 8),
        ];
        let small = |(p, q): (i64, i64)| Small::reduce(p as i128, q as i128).unwrap();
        let big = |(p, q): (i64, i64)| Rational::new(p.into(), q.into());
        for &x in &samples {
            for &y in &samples {
                let (a, b) = (small(x), small(y));
                let (c, d) = (big(x), big(y));
                assert_eq!(a.cmp(&b), c.cmp(&d));
                for (got, want) in [
                    (a.add(&b), &c + &d),
                    (a.sub(&b), &c - &d),
                    (a.mul(&b), &c * &d),
                ] {
                    if let Ok(v) = got {
                        assert_eq!(v.to_rational(), want);
                    }
                }
                if !Zero::is_zero(&d) {
                    if let Ok(v) = a.div(&b) {
                        assert_eq!(v.to_rational(), &c / &d);
                    }
                }
            }
        }
        assert_eq!(small((i64::MAX, 1)).add(&small((1, 1))), Err(Overflow));
        assert_eq!(binary_gcd(48, 18), 6);
        assert_eq!(binary_gcd(0, 7), 7);
    }

    #[test]
    fn large_worths_fall_back_to_big_rationals() {
        // The phase-one objective starts at 4h = 2^63.
        let huge = 1i64 << 61;
        let lp = PmasLp::new(2, |s| s.len() as i64 * huge).unwrap();
        assert!(lp.solve_in::<Small>().is_err());
        let Feasibility::Feasible(w) = lp.solve().unwrap() else {
            panic!("additive game admits a PMAS");
        };
        let total: Rational = w.payoff_vector(Coalition::full(2)).iter().sum();
        assert_eq!(total, Rational::from_integer((2 * huge).into()));
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            PmasLp::new(11, |_| 0),
            Err(Error::SizeLimit { .. })
        ));
    }
}
