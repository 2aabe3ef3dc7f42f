//! Explicit finite commutative rings with identity.
//!
//! Every ring is materialized as a pair of Cayley tables over element indices
//! `0..order`. Index 0 is always the additive zero. Constructors fix the
//! element encoding so that labels and indices are reproducible:
//!
//! * `Z_n`: residue `i` at index `i`;
//! * `Z_p[x]/(f)` and `GF(p^k)`: coefficient tuples `(c_0, ..., c_{k-1})` in
//!   lexicographic order, `c_0` most significant;
//! * products: mixed-radix tuples in lexicographic order;
//! * idealizations `R(+)R^n`: `(r, v)` tuples in lexicographic order.

mod poly;

pub use poly::{for_each_monic, lex_min_irreducible, Poly};

use std::fmt;

use thiserror::Error;

/// Index of an element in its ring's tables.
pub type ElementIndex = usize;

/// Default upper bound on the number of elements of a constructed ring.
pub const DEFAULT_MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid order {0}: a ring needs at least 2 elements")]
    InvalidOrder(usize),
    #[error("invalid characteristic {0}: expected a prime")]
    InvalidCharacteristic(u64),
    #[error("invalid modulus {0}: expected a monic polynomial of degree at least 2")]
    InvalidModulus(String),
    #[error("no irreducible polynomial of degree {degree} over Z{p}")]
    NoIrreducible { p: u32, degree: usize },
    #[error("ring of order {order} exceeds the order cap {cap}")]
    SizeLimit { order: u128, cap: usize },
    #[error("a product needs at least 2 factors, got {0}")]
    TooFewFactors(usize),
    #[error("idealization rank must be at least 1")]
    InvalidRank,
    #[error("element index {index} out of range for ring of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("malformed tables: {0}")]
    MalformedTables(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Atom,
    Product,
    Idealization,
}

/// A finite commutative ring given by explicit addition and multiplication
/// tables. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    order: usize,
    labels: Vec<String>,
    add: Vec<u32>,
    mul: Vec<u32>,
    one: ElementIndex,
    spec_text: String,
    shape: Shape,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("spec_text", &self.spec_text)
            .field("order", &self.order)
            .field("one", &self.one)
            .finish_non_exhaustive()
    }
}

impl FiniteRing {
    /// Assemble a ring from raw tables. Only shape and index ranges are
    /// checked here; use [`verify_ring_axioms`] for the algebra.
    pub fn from_tables(
        labels: Vec<String>,
        add: Vec<u32>,
        mul: Vec<u32>,
        one: ElementIndex,
        spec_text: impl Into<String>,
    ) -> Result<Self, RingError> {
        let order = labels.len();
        if order < 2 {
            return Err(RingError::InvalidOrder(order));
        }
        if add.len() != order * order || mul.len() != order * order {
            return Err(RingError::MalformedTables(format!(
                "expected {} table entries, got add={} mul={}",
                order * order,
                add.len(),
                mul.len()
            )));
        }
        if let Some(bad) = add.iter().chain(mul.iter()).find(|&&x| x as usize >= order) {
            return Err(RingError::MalformedTables(format!("entry {bad} out of range")));
        }
        if one >= order {
            return Err(RingError::IndexOutOfRange { index: one, order });
        }
        Ok(FiniteRing { order, labels, add, mul, one, spec_text: spec_text.into(), shape: Shape::Atom })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn one(&self) -> ElementIndex {
        self.one
    }

    pub fn zero(&self) -> ElementIndex {
        0
    }

    pub fn spec_text(&self) -> &str {
        &self.spec_text
    }

    pub(crate) fn set_spec_text(&mut self, text: String) {
        self.spec_text = text;
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementIndex) -> &str {
        &self.labels[x]
    }

    #[inline]
    pub fn add(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: ElementIndex, b: ElementIndex) -> ElementIndex {
        self.mul[a * self.order + b] as usize
    }

    pub fn add_table(&self) -> &[u32] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }

    fn check_index(&self, x: ElementIndex) -> Result<(), RingError> {
        if x < self.order {
            Ok(())
        } else {
            Err(RingError::IndexOutOfRange { index: x, order: self.order })
        }
    }

    /// `ann(x) = { y : xy = 0 }`, in index order.
    pub fn annihilator(&self, x: ElementIndex) -> Result<Vec<ElementIndex>, RingError> {
        self.check_index(x)?;
        Ok((0..self.order).filter(|&y| self.mul(x, y) == 0).collect())
    }

    pub fn is_zero_divisor(&self, x: ElementIndex) -> bool {
        x == 0 || (1..self.order).any(|y| self.mul(x, y) == 0)
    }

    /// `Z(R)`: zero together with every element that has a nonzero
    /// annihilating partner.
    pub fn zero_divisors(&self) -> Vec<ElementIndex> {
        (0..self.order).filter(|&x| self.is_zero_divisor(x)).collect()
    }

    /// `U(R)`, the complement of `Z(R)` in a finite commutative ring.
    pub fn units(&self) -> Vec<ElementIndex> {
        (0..self.order).filter(|&x| !self.is_zero_divisor(x)).collect()
    }

    /// Elements with `x^n = 0` for some `n <= order`.
    pub fn nilradical(&self) -> Vec<ElementIndex> {
        (0..self.order)
            .filter(|&x| {
                let mut pow = x;
                for _ in 0..self.order {
                    if pow == 0 {
                        return true;
                    }
                    pow = self.mul(pow, x);
                }
                pow == 0
            })
            .collect()
    }

    /// A finite commutative ring is local iff `Z(R)` is an ideal.
    pub fn is_local(&self) -> bool {
        let z = self.zero_divisors();
        let mut member = vec![false; self.order];
        for &x in &z {
            member[x] = true;
        }
        for &a in &z {
            for &b in &z {
                if !member[self.add(a, b)] {
                    return false;
                }
            }
            for r in 0..self.order {
                if !member[self.mul(a, r)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_field(&self) -> bool {
        self.zero_divisors().len() == 1
    }
}

/// Constructors for the supported ring families, sharing an order cap.
#[derive(Clone, Copy, Debug)]
pub struct RingBuilder {
    max_order: usize,
}

impl Default for RingBuilder {
    fn default() -> Self {
        RingBuilder { max_order: DEFAULT_MAX_ORDER }
    }
}

impl RingBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_order(max_order: usize) -> Self {
        RingBuilder { max_order }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn check_cap(&self, order: u128) -> Result<usize, RingError> {
        if order > self.max_order as u128 {
            Err(RingError::SizeLimit { order, cap: self.max_order })
        } else {
            Ok(order as usize)
        }
    }

    /// `Z/nZ`.
    pub fn zn(&self, n: usize) -> Result<FiniteRing, RingError> {
        if n < 2 {
            return Err(RingError::InvalidOrder(n));
        }
        self.check_cap(n as u128)?;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                add.push(((a + b) % n) as u32);
                mul.push(((a * b) % n) as u32);
            }
        }
        Ok(FiniteRing {
            order: n,
            labels: (0..n).map(|i| i.to_string()).collect(),
            add,
            mul,
            one: 1,
            spec_text: format!("Z{n}"),
            shape: Shape::Atom,
        })
    }

    /// The field with `p^k` elements, as `Z_p[x]/(m)` for the lexicographically
    /// smallest monic irreducible `m` of degree `k`. For `k = 1` this is `Z_p`.
    pub fn gf(&self, p: u64, k: u32) -> Result<FiniteRing, RingError> {
        if !is_prime(p) {
            return Err(RingError::InvalidCharacteristic(p));
        }
        if k == 0 {
            return Err(RingError::InvalidOrder(1));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        self.check_cap(order)?;
        let p32 = p as u32;
        let mut ring = if k == 1 {
            self.zn(p as usize)?
        } else {
            let modulus =
                lex_min_irreducible(k as usize, p32).ok_or(RingError::NoIrreducible { p: p32, degree: k as usize })?;
            self.poly_quotient(p32, &modulus)?
        };
        ring.spec_text = format!("GF({order})");
        Ok(ring)
    }

    /// `Z_p[x]/(f)` for a monic `f` of degree at least 2 (not necessarily
    /// irreducible).
    pub fn quotient(&self, p: u64, f: &Poly) -> Result<FiniteRing, RingError> {
        if !is_prime(p) {
            return Err(RingError::InvalidCharacteristic(p));
        }
        let p32 = p as u32;
        // renormalize in case the caller built f over a different modulus
        let f = Poly::new(f.coeffs().to_vec(), p32);
        match f.degree() {
            Some(d) if d >= 2 && f.is_monic() => {}
            _ => return Err(RingError::InvalidModulus(f.to_string())),
        }
        let mut ring = self.poly_quotient(p32, &f)?;
        ring.spec_text = format!("Z{p}[x]/({f})");
        Ok(ring)
    }

    fn poly_quotient(&self, p: u32, f: &Poly) -> Result<FiniteRing, RingError> {
        let k = f.degree().expect("modulus is nonzero");
        let order = self.check_cap((p as u128).checked_pow(k as u32).unwrap_or(u128::MAX))?;
        // element index <-> coefficient tuple, c_0 most significant
        let decode = |mut idx: usize| -> Poly {
            let mut coeffs = vec![0u32; k];
            for i in (0..k).rev() {
                coeffs[i] = (idx % p as usize) as u32;
                idx /= p as usize;
            }
            Poly::new(coeffs, p)
        };
        let encode = |poly: &Poly| -> usize {
            let c = poly.coeffs();
            (0..k).fold(0usize, |acc, i| acc * p as usize + c.get(i).copied().unwrap_or(0) as usize)
        };
        let elems: Vec<Poly> = (0..order).map(decode).collect();
        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        for a in &elems {
            for b in &elems {
                let len = k.max(1);
                let sum: Vec<u32> = (0..len)
                    .map(|i| {
                        let x = a.coeffs().get(i).copied().unwrap_or(0);
                        let y = b.coeffs().get(i).copied().unwrap_or(0);
                        (x + y) % p
                    })
                    .collect();
                add.push(encode(&Poly::new(sum, p)) as u32);
                mul.push(encode(&a.mul(b, p).rem_monic(f, p)) as u32);
            }
        }
        let one = encode(&Poly::new(vec![1], p));
        Ok(FiniteRing {
            order,
            labels: elems.iter().map(|e| e.to_string()).collect(),
            add,
            mul,
            one,
            spec_text: String::new(),
            shape: Shape::Atom,
        })
    }

    /// Direct product with componentwise operations.
    pub fn product(&self, factors: &[FiniteRing]) -> Result<FiniteRing, RingError> {
        if factors.len() < 2 {
            return Err(RingError::TooFewFactors(factors.len()));
        }
        let order = factors.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.order as u128)).unwrap_or(u128::MAX);
        let order = self.check_cap(order)?;
        let radices: Vec<usize> = factors.iter().map(|f| f.order).collect();
        let tuples: Vec<Vec<usize>> = (0..order).map(|i| mixed_radix_digits(i, &radices)).collect();
        let compose = |digits: &[usize]| digits.iter().zip(&radices).fold(0usize, |acc, (d, r)| acc * r + d);

        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        let mut buf_a = vec![0usize; factors.len()];
        let mut buf_m = vec![0usize; factors.len()];
        for x in &tuples {
            for y in &tuples {
                for (i, f) in factors.iter().enumerate() {
                    buf_a[i] = f.add(x[i], y[i]);
                    buf_m[i] = f.mul(x[i], y[i]);
                }
                add.push(compose(&buf_a) as u32);
                mul.push(compose(&buf_m) as u32);
            }
        }
        let ones: Vec<usize> = factors.iter().map(|f| f.one).collect();
        let labels = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&d, f)| f.label(d)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let spec_text = factors
            .iter()
            .map(|f| match f.shape {
                Shape::Product => format!("({})", f.spec_text),
                _ => f.spec_text.clone(),
            })
            .collect::<Vec<_>>()
            .join("x");
        Ok(FiniteRing { order, labels, add, mul, one: compose(&ones), spec_text, shape: Shape::Product })
    }

    /// The idealization `R(+)R^rank`: pairs `(a, v)` with
    /// `(a,v)+(b,w) = (a+b, v+w)` and `(a,v)(b,w) = (ab, aw+bv)`.
    pub fn idealization(&self, base: &FiniteRing, rank: usize) -> Result<FiniteRing, RingError> {
        if rank == 0 {
            return Err(RingError::InvalidRank);
        }
        let order = (base.order as u128).checked_pow(rank as u32 + 1).unwrap_or(u128::MAX);
        let order = self.check_cap(order)?;
        let radices = vec![base.order; rank + 1];
        let tuples: Vec<Vec<usize>> = (0..order).map(|i| mixed_radix_digits(i, &radices)).collect();
        let compose = |digits: &[usize]| digits.iter().fold(0usize, |acc, &d| acc * base.order + d);

        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        let mut buf_a = vec![0usize; rank + 1];
        let mut buf_m = vec![0usize; rank + 1];
        for x in &tuples {
            for y in &tuples {
                for i in 0..=rank {
                    buf_a[i] = base.add(x[i], y[i]);
                }
                buf_m[0] = base.mul(x[0], y[0]);
                for i in 1..=rank {
                    buf_m[i] = base.add(base.mul(x[0], y[i]), base.mul(y[0], x[i]));
                }
                add.push(compose(&buf_a) as u32);
                mul.push(compose(&buf_m) as u32);
            }
        }
        let mut one_digits = vec![0usize; rank + 1];
        one_digits[0] = base.one;
        let labels = tuples
            .iter()
            .map(|t| {
                let module: Vec<&str> = t[1..].iter().map(|&d| base.label(d)).collect();
                format!("({},[{}])", base.label(t[0]), module.join(","))
            })
            .collect();
        let base_text = match base.shape {
            Shape::Atom => base.spec_text.clone(),
            _ => format!("({})", base.spec_text),
        };
        let spec_text =
            if rank == 1 { format!("{base_text}(+){base_text}") } else { format!("{base_text}(+){base_text}^{rank}") };
        Ok(FiniteRing { order, labels, add, mul, one: compose(&one_digits), spec_text, shape: Shape::Idealization })
    }
}

fn mixed_radix_digits(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0usize; radices.len()];
    for i in (0..radices.len()).rev() {
        digits[i] = idx % radices[i];
        idx /= radices[i];
    }
    digits
}

pub fn build_zn(n: usize) -> Result<FiniteRing, RingError> {
    RingBuilder::default().zn(n)
}

pub fn build_gf(p: u64, k: u32) -> Result<FiniteRing, RingError> {
    RingBuilder::default().gf(p, k)
}

pub fn build_quotient(p: u64, f: &Poly) -> Result<FiniteRing, RingError> {
    RingBuilder::default().quotient(p, f)
}

pub fn build_product(factors: &[FiniteRing]) -> Result<FiniteRing, RingError> {
    RingBuilder::default().product(factors)
}

pub fn build_idealization(base: &FiniteRing, rank: usize) -> Result<FiniteRing, RingError> {
    RingBuilder::default().idealization(base, rank)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, k))` when `q = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    AdditiveIdentity,
    AdditiveInverses,
    AdditionCommutative,
    AdditionAssociative,
    MultiplicationCommutative,
    MultiplicationAssociative,
    MultiplicativeIdentity,
    Distributive,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::AdditiveIdentity,
        Axiom::AdditiveInverses,
        Axiom::AdditionCommutative,
        Axiom::AdditionAssociative,
        Axiom::MultiplicationCommutative,
        Axiom::MultiplicationAssociative,
        Axiom::MultiplicativeIdentity,
        Axiom::Distributive,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// First counterexample found, padded with zeros for unary/binary laws.
    pub witness: Option<(ElementIndex, ElementIndex, ElementIndex)>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Exhaustive check of the commutative-ring-with-identity axioms. Cubic in
/// the order for associativity and distributivity.
pub fn verify_ring_axioms(r: &FiniteRing) -> AxiomReport {
    let n = r.order;
    let elems = 0..n;
    let find2 = |pred: &dyn Fn(usize, usize) -> bool| {
        elems.clone().flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| !pred(a, b)).map(|(a, b)| (a, b, 0))
    };
    let find3 = |pred: &dyn Fn(usize, usize, usize) -> bool| {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !pred(a, b, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    };
    let checks = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let witness = match axiom {
                Axiom::AdditiveIdentity => (0..n).find(|&a| r.add(a, 0) != a || r.add(0, a) != a).map(|a| (a, 0, 0)),
                Axiom::AdditiveInverses => (0..n).find(|&a| !(0..n).any(|b| r.add(a, b) == 0)).map(|a| (a, 0, 0)),
                Axiom::AdditionCommutative => find2(&|a, b| r.add(a, b) == r.add(b, a)),
                Axiom::AdditionAssociative => find3(&|a, b, c| r.add(r.add(a, b), c) == r.add(a, r.add(b, c))),
                Axiom::MultiplicationCommutative => find2(&|a, b| r.mul(a, b) == r.mul(b, a)),
                Axiom::MultiplicationAssociative => find3(&|a, b, c| r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c))),
                Axiom::MultiplicativeIdentity => {
                    if r.one == 0 {
                        Some((0, 0, 0))
                    } else {
                        (0..n).find(|&a| r.mul(a, r.one) != a || r.mul(r.one, a) != a).map(|a| (a, r.one, 0))
                    }
                }
                Axiom::Distributive => find3(&|a, b, c| r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c))),
            };
            AxiomCheck { axiom, witness }
        })
        .collect();
    AxiomReport { checks }
}
