//! Skew braces, the cyclic brace family on invertible residues mod 2^m,
//! admissibility of a parameter set `Y`, and the shelf / twist / bullet
//! data a brace induces.
//!
//! All brace arithmetic is table-driven over carrier indices; modular
//! integer semantics exists only inside [`cyclic_brace`]. Mixed `+`/`∘`
//! expressions are evaluated strictly left-to-right with explicit inverse
//! lookups, no algebraic simplification.

use crate::carrier::{Carrier, ParamFamily, ParamSubset};
use crate::error::{Counterexample, Error, Result, Verdict};
use crate::shelves::{check_p_rack, PShelf};

/// Two group structures on one carrier, linked by
/// `a ∘ (b + c) = a∘b − a + a∘c`, with coinciding identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewBrace {
    pub carrier: Carrier,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<usize>,
    /// The shared additive/multiplicative identity index.
    pub identity: usize,
}

impl SkewBrace {
    /// Verify the brace axioms and construct. `add` and `mul` are row-major
    /// `n x n` tables over carrier indices.
    pub fn new(carrier: Carrier, add: Vec<usize>, mul: Vec<usize>) -> Result<Self> {
        let n = carrier.n;
        let v = check_skew_brace(&add, &mul, n);
        if let Some(c) = v.counterexample {
            return Err(Error::Invalid(format!("not a skew brace: {c}")));
        }
        let (e_add, neg) = group_data(&add, n).expect("checked");
        let (_e_mul, inv) = group_data(&mul, n).expect("checked");
        Ok(SkewBrace {
            carrier,
            add,
            mul,
            neg,
            inv,
            identity: e_add,
        })
    }

    pub fn n(&self) -> usize {
        self.carrier.n
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.carrier.n + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.carrier.n + b]
    }

    /// Additive inverse `−a`.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// Multiplicative inverse `a^{-1}`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Left-to-right `∘`-product of a non-empty chain.
    pub fn mul_chain(&self, xs: &[usize]) -> usize {
        xs.iter().skip(1).fold(xs[0], |acc, &x| self.mul(acc, x))
    }

    /// Left-to-right `+`-sum of a non-empty chain.
    pub fn add_chain(&self, xs: &[usize]) -> usize {
        xs.iter().skip(1).fold(xs[0], |acc, &x| self.add(acc, x))
    }

    pub fn is_abelian_add(&self) -> bool {
        let n = self.n();
        (0..n).all(|a| (0..n).all(|b| self.add(a, b) == self.add(b, a)))
    }

    pub fn is_commutative_mul(&self) -> bool {
        let n = self.n();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Raw tables (for serialization).
    pub fn tables(&self) -> (&[usize], &[usize]) {
        (&self.add, &self.mul)
    }
}

/// Group axioms for one table: returns `(identity, inverses)` or the first
/// failing axiom.
fn group_data(
    table: &[usize],
    n: usize,
) -> std::result::Result<(usize, Vec<usize>), Counterexample> {
    let at = |a: usize, b: usize| table[a * n + b];
    // associativity
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = at(at(a, b), c);
                let rhs = at(a, at(b, c));
                if lhs != rhs {
                    return Err(Counterexample::new(
                        "associativity",
                        vec![],
                        vec![a, b, c],
                        lhs,
                        rhs,
                    ));
                }
            }
        }
    }
    // two-sided identity
    let mut identity = None;
    for e in 0..n {
        if (0..n).all(|a| at(e, a) == a && at(a, e) == a) {
            identity = Some(e);
            break;
        }
    }
    let Some(e) = identity else {
        return Err(Counterexample::new(
            "identity-existence",
            vec![],
            vec![],
            "no two-sided identity",
            "",
        ));
    };
    // two-sided inverses
    let mut inv = Vec::with_capacity(n);
    for a in 0..n {
        match (0..n).find(|&b| at(a, b) == e && at(b, a) == e) {
            Some(b) => inv.push(b),
            None => {
                return Err(Counterexample::new(
                    "inverse-existence",
                    vec![],
                    vec![a],
                    "no two-sided inverse",
                    "",
                ))
            }
        }
    }
    Ok((e, inv))
}

/// Exhaustive skew-brace check: both tables are groups, identities
/// coincide, and the left distributivity law holds for all `a, b, c`.
pub fn check_skew_brace(add: &[usize], mul: &[usize], n: usize) -> Verdict {
    if add.len() != n * n || mul.len() != n * n {
        return Verdict::fail(
            Counterexample::new("table-shape", vec![], vec![], add.len(), n * n),
            0,
        );
    }
    if add.iter().chain(mul.iter()).any(|&v| v >= n) {
        return Verdict::fail(
            Counterexample::new("table-range", vec![], vec![], "entry out of range", ""),
            0,
        );
    }
    let mut checked = 2 * (n as u64).pow(3);
    let (e_add, neg) = match group_data(add, n) {
        Ok(x) => x,
        Err(mut c) => {
            c.site = format!("add-{}", c.site);
            return Verdict::fail(c, checked);
        }
    };
    let (e_mul, _) = match group_data(mul, n) {
        Ok(x) => x,
        Err(mut c) => {
            c.site = format!("mul-{}", c.site);
            return Verdict::fail(c, checked);
        }
    };
    if e_add != e_mul {
        return Verdict::fail(
            Counterexample::new("shared-identity", vec![], vec![], e_add, e_mul),
            checked,
        );
    }
    let at_add = |a: usize, b: usize| add[a * n + b];
    let at_mul = |a: usize, b: usize| mul[a * n + b];
    for (a, &neg_a) in neg.iter().enumerate() {
        for b in 0..n {
            for c in 0..n {
                checked += 1;
                // a ∘ (b + c) = a∘b − a + a∘c, evaluated left-to-right
                let lhs = at_mul(a, at_add(b, c));
                let rhs = at_add(at_add(at_mul(a, b), neg_a), at_mul(a, c));
                if lhs != rhs {
                    return Verdict::fail(
                        Counterexample::new(
                            "left-brace-distributivity",
                            vec![],
                            vec![a, b, c],
                            lhs,
                            rhs,
                        ),
                        checked,
                    );
                }
            }
        }
    }
    Verdict::pass(checked)
}

/// Word-size bound on the cyclic brace exponent; tables are `4^{m-1}`
/// entries so memory blows up quickly past this.
pub const MAX_CYCLIC_EXPONENT: u32 = 12;

/// The brace of invertible integers modulo `2^m`: carrier = odd residues
/// with their natural labels, `a +₁ b = a − 1 + b (mod 2^m)` and `∘` =
/// integer multiplication mod `2^m`. Always a two-sided brace with abelian
/// addition.
pub fn cyclic_brace(m: u32) -> Result<SkewBrace> {
    if m == 0 || m > MAX_CYCLIC_EXPONENT {
        return Err(Error::Invalid(format!(
            "cyclic brace exponent must be in 1..={MAX_CYCLIC_EXPONENT}, got {m}"
        )));
    }
    let modulus: i64 = 1i64 << m;
    let labels: Vec<i64> = (0..modulus).filter(|x| x % 2 == 1).collect();
    let n = labels.len();
    let idx = |label: i64| -> usize {
        let l = label.rem_euclid(modulus);
        labels.iter().position(|&x| x == l).expect("odd residue")
    };
    let mut add = vec![0usize; n * n];
    let mut mul = vec![0usize; n * n];
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            add[i * n + j] = idx((a - 1 + b).rem_euclid(modulus));
            mul[i * n + j] = idx((a * b).rem_euclid(modulus));
        }
    }
    SkewBrace::new(Carrier::with_labels(labels)?, add, mul)
}

/// Which admissibility bullet set applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityMode {
    /// Conditions for the brace shelf: `+` distributes over every `z ∈ Y`
    /// and `Y` is central in `(X, +)`; `ξ` ranges over all of `X`.
    Rack,
    /// Conditions for the brace twist: additionally `Y` commutes pairwise
    /// under `∘`, and `ξ ∈ Y` must be central in `(X, ∘)`.
    Twist,
}

/// Recorded admissibility flags for a `(brace, Y, ξ)` triple; the verdict
/// aggregates the bullets required by the mode.
#[derive(Debug, Clone)]
pub struct AdmissibleY {
    pub mode: AdmissibilityMode,
    pub y: ParamSubset,
    pub xi: usize,
    /// `z ∘ w = w ∘ z` for all `z, w ∈ Y`.
    pub y_pairwise_commute: bool,
    /// `(a + b) ∘ z = a∘z − z + b∘z` for all `a, b ∈ X`, `z ∈ Y`.
    pub add_distributes_over_y: bool,
    /// Every `z ∈ Y` is central in `(X, +)`.
    pub y_add_central: bool,
    pub xi_in_y: bool,
    /// `ξ` is central in `(X, ∘)`.
    pub xi_mul_central: bool,
    pub verdict: Verdict,
}

/// Exhaustively evaluate the admissibility bullets of a `(Y, ξ)` pair.
pub fn check_admissible_y(
    brace: &SkewBrace,
    y: &ParamSubset,
    xi: usize,
    mode: AdmissibilityMode,
) -> AdmissibleY {
    let n = brace.n();
    let mut checked = 0u64;
    let mut first_fail: Option<Counterexample> = None;
    let record = |cond: &str,
                  ok: bool,
                  zs: Vec<usize>,
                  elems: Vec<usize>,
                  lhs: usize,
                  rhs: usize,
                  first: &mut Option<Counterexample>| {
        if !ok && first.is_none() {
            *first = Some(Counterexample::new(cond, zs, elems, lhs, rhs));
        }
    };

    let mut y_pairwise_commute = true;
    for (si, &z) in y.indices.iter().enumerate() {
        for (sj, &w) in y.indices.iter().enumerate() {
            checked += 1;
            let lhs = brace.mul(z, w);
            let rhs = brace.mul(w, z);
            if lhs != rhs {
                y_pairwise_commute = false;
                if matches!(mode, AdmissibilityMode::Twist) {
                    record(
                        "y-pairwise-commute",
                        false,
                        vec![si, sj],
                        vec![],
                        lhs,
                        rhs,
                        &mut first_fail,
                    );
                }
            }
        }
    }

    let mut add_distributes_over_y = true;
    for (s, &z) in y.indices.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                checked += 1;
                let lhs = brace.mul(brace.add(a, b), z);
                let rhs = brace.add(brace.add(brace.mul(a, z), brace.neg(z)), brace.mul(b, z));
                if lhs != rhs {
                    add_distributes_over_y = false;
                    record(
                        "add-distributes-over-y",
                        false,
                        vec![s],
                        vec![a, b],
                        lhs,
                        rhs,
                        &mut first_fail,
                    );
                }
            }
        }
    }

    let mut y_add_central = true;
    for (s, &z) in y.indices.iter().enumerate() {
        for a in 0..n {
            checked += 1;
            let lhs = brace.add(z, a);
            let rhs = brace.add(a, z);
            if lhs != rhs {
                y_add_central = false;
                record(
                    "y-add-central",
                    false,
                    vec![s],
                    vec![a],
                    lhs,
                    rhs,
                    &mut first_fail,
                );
            }
        }
    }

    let xi_in_y = y.indices.contains(&xi);
    let mut xi_mul_central = true;
    for a in 0..n {
        checked += 1;
        let lhs = brace.mul(xi, a);
        let rhs = brace.mul(a, xi);
        if lhs != rhs {
            xi_mul_central = false;
            if matches!(mode, AdmissibilityMode::Twist) {
                record(
                    "xi-mul-central",
                    false,
                    vec![],
                    vec![a],
                    lhs,
                    rhs,
                    &mut first_fail,
                );
            }
        }
    }
    if matches!(mode, AdmissibilityMode::Twist) && !xi_in_y && first_fail.is_none() {
        first_fail = Some(Counterexample::new(
            "xi-in-y",
            vec![],
            vec![xi],
            "xi not in Y",
            "",
        ));
    }

    let holds = match mode {
        AdmissibilityMode::Rack => add_distributes_over_y && y_add_central,
        AdmissibilityMode::Twist => {
            y_pairwise_commute
                && add_distributes_over_y
                && y_add_central
                && xi_in_y
                && xi_mul_central
        }
    };
    let verdict = if holds {
        Verdict::pass(checked)
    } else {
        Verdict {
            holds: false,
            counterexample: first_fail,
            checked,
            complete: true,
        }
    };
    AdmissibleY {
        mode,
        y: y.clone(),
        xi,
        y_pairwise_commute,
        add_distributes_over_y,
        y_add_central,
        xi_in_y,
        xi_mul_central,
        verdict,
    }
}

/// `a ▷_{(u,v)} b = −ξ∘a∘u∘v⁻¹ + ξ∘b + a∘u∘v⁻¹` for arbitrary parameter
/// elements `u, v` of the carrier.
pub fn shelf_op_general(
    br: &SkewBrace,
    xi: usize,
    u: usize,
    v: usize,
    a: usize,
    b: usize,
) -> usize {
    let w = br.mul_chain(&[a, u, br.inv(v)]);
    let t1 = br.mul(xi, w);
    let t2 = br.mul(xi, b);
    br.add_chain(&[br.neg(t1), t2, w])
}

/// Closed-form inverse of the left translation `a ▷_{(u,v)} ·`.
pub fn shelf_op_inverse_general(
    br: &SkewBrace,
    xi: usize,
    u: usize,
    v: usize,
    a: usize,
    b: usize,
) -> usize {
    let t = br.mul_chain(&[a, u, br.inv(v)]);
    let xinv = br.inv(xi);
    br.add_chain(&[
        t,
        br.neg(xinv),
        br.mul(xinv, b),
        br.neg(br.mul(xinv, t)),
        xinv,
    ])
}

/// `σ^{(u,v)}_a(b) = u⁻¹ − ξ∘a∘u⁻¹∘v + a∘b∘ξ∘v` for arbitrary parameter
/// elements.
pub fn sigma_general(br: &SkewBrace, xi: usize, u: usize, v: usize, a: usize, b: usize) -> usize {
    let t1 = br.inv(u);
    let t2 = br.mul_chain(&[xi, a, br.inv(u), v]);
    let t3 = br.mul_chain(&[a, b, xi, v]);
    br.add_chain(&[t1, br.neg(t2), t3])
}

/// Closed-form inverse `(σ^{(u,v)}_a)⁻¹(b) = u⁻¹ − a⁻¹∘ξ⁻¹∘u⁻¹∘v⁻¹ +
/// a⁻¹∘b∘ξ⁻¹∘v⁻¹`.
pub fn sigma_inverse_general(
    br: &SkewBrace,
    xi: usize,
    u: usize,
    v: usize,
    a: usize,
    b: usize,
) -> usize {
    let ai = br.inv(a);
    let xinv = br.inv(xi);
    let t1 = br.inv(u);
    let t2 = br.mul_chain(&[ai, xinv, br.inv(u), br.inv(v)]);
    let t3 = br.mul_chain(&[ai, b, xinv, br.inv(v)]);
    br.add_chain(&[t1, br.neg(t2), t3])
}

/// `a •_{(u,v)} b = ξ∘a∘u + b∘v` for arbitrary parameter elements.
pub fn bullet_general(br: &SkewBrace, xi: usize, u: usize, v: usize, a: usize, b: usize) -> usize {
    br.add(br.mul_chain(&[xi, a, u]), br.mul(b, v))
}

/// The shelf a brace induces for an admissible `Y` and any `ξ ∈ X`; the
/// result is verified to be a p-rack.
pub fn brace_shelf(brace: &SkewBrace, y: &ParamSubset, xi: usize) -> Result<PShelf> {
    let adm = check_admissible_y(brace, y, xi, AdmissibilityMode::Rack);
    if !adm.verdict.holds {
        return Err(Error::NotAdmissible(Box::new(
            adm.verdict
                .counterexample
                .unwrap_or_else(|| Counterexample::new("admissibility", vec![], vec![], "", "")),
        )));
    }
    let fam = ParamFamily::from_fn(brace.n(), y.clone(), |zi, zj, a, b| {
        shelf_op_general(brace, xi, y.indices[zi], y.indices[zj], a, b)
    });
    let v = check_p_rack(&fam);
    match v.counterexample {
        None => Ok(PShelf::new_unchecked(fam)),
        Some(c) => Err(Error::NotARack(Box::new(c))),
    }
}

/// Companion family of inverse left translations, from the closed-form
/// inverse rather than table inversion.
pub fn brace_shelf_inverse(brace: &SkewBrace, y: &ParamSubset, xi: usize) -> Result<ParamFamily> {
    let adm = check_admissible_y(brace, y, xi, AdmissibilityMode::Rack);
    if !adm.verdict.holds {
        return Err(Error::NotAdmissible(Box::new(
            adm.verdict
                .counterexample
                .unwrap_or_else(|| Counterexample::new("admissibility", vec![], vec![], "", "")),
        )));
    }
    Ok(ParamFamily::from_fn(
        brace.n(),
        y.clone(),
        |zi, zj, a, b| shelf_op_inverse_general(brace, xi, y.indices[zi], y.indices[zj], a, b),
    ))
}

/// The `(σ, τ)` twist data a brace induces for a twist-admissible `(Y, ξ)`.
/// `σ` rows are stored under the subscript element `a`; `τ` is recomputed
/// from `σ` and the brace shelf via the twist composition formula, never
/// taken from the closed form directly.
pub fn brace_sigma_tau(
    brace: &SkewBrace,
    y: &ParamSubset,
    xi: usize,
) -> Result<(ParamFamily, ParamFamily)> {
    let adm = check_admissible_y(brace, y, xi, AdmissibilityMode::Twist);
    if !adm.verdict.holds {
        return Err(Error::NotAdmissible(Box::new(
            adm.verdict
                .counterexample
                .unwrap_or_else(|| Counterexample::new("admissibility", vec![], vec![], "", "")),
        )));
    }
    let n = brace.n();
    let sigma = ParamFamily::from_fn(n, y.clone(), |zi, zj, a, b| {
        sigma_general(brace, xi, y.indices[zi], y.indices[zj], a, b)
    });
    if let Some((zi, zj, a)) = sigma.first_non_bijective() {
        return Err(Error::SigmaNotBijective { zi, zj, a });
    }
    let shelf = ParamFamily::from_fn(n, y.clone(), |zi, zj, a, b| {
        shelf_op_general(brace, xi, y.indices[zi], y.indices[zj], a, b)
    });
    let tau = tau_from_sigma_shelf(&sigma, &shelf)?;
    Ok((sigma, tau))
}

/// `τ^{z_ij}_b(a) = (σ^{z_ji}_{σ^{z_ij}_a(b)})⁻¹(σ^{z_ij}_a(b) ▷_{z_ij} a)`,
/// the unique τ completing a `(σ, ▷)` pair to a twisted map.
pub fn tau_from_sigma_shelf(sigma: &ParamFamily, shelf: &ParamFamily) -> Result<ParamFamily> {
    let (n, m) = (sigma.n, sigma.m());
    if shelf.n != n || shelf.m() != m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: shelf.n * shelf.m(),
        });
    }
    // Invert every sigma row once up front.
    let sigma_inv = sigma.invert_each()?;
    Ok(ParamFamily::from_fn(
        n,
        sigma.params.clone(),
        |zi, zj, b, a| {
            let s = sigma.apply(zi, zj, a, b);
            let t = shelf.apply(zi, zj, s, a);
            sigma_inv.apply(zj, zi, s, t)
        },
    ))
}

/// The decorated product `a •_{z_ij} b = ξ∘a∘z_i + b∘z_j` over the `Y`
/// slots; every section `b ↦ a • b` is a bijection.
pub fn brace_bullet(brace: &SkewBrace, y: &ParamSubset, xi: usize) -> Result<ParamFamily> {
    let adm = check_admissible_y(brace, y, xi, AdmissibilityMode::Rack);
    if !adm.verdict.holds {
        return Err(Error::NotAdmissible(Box::new(
            adm.verdict
                .counterexample
                .unwrap_or_else(|| Counterexample::new("admissibility", vec![], vec![], "", "")),
        )));
    }
    let fam = ParamFamily::from_fn(brace.n(), y.clone(), |zi, zj, a, b| {
        bullet_general(brace, xi, y.indices[zi], y.indices[zj], a, b)
    });
    if let Some((zi, zj, a)) = fam.first_non_bijective() {
        return Err(Error::NotAdmissible(Box::new(Counterexample::new(
            "bullet-bijectivity",
            vec![zi, zj],
            vec![a],
            "non-bijective section",
            "",
        ))));
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shelves::check_p_shelf;

    /// Independent oracle: the cyclic-brace shelf computed directly in
    /// modular integer arithmetic on labels, never through brace tables.
    fn shelf_oracle(m: u32, xi: i64, u: i64, v: i64, a: i64, b: i64) -> i64 {
        let md = 1i64 << m;
        let vinv = (1..md).step_by(2).find(|&x| (x * v) % md == 1).unwrap();
        let w = (a * u % md) * vinv % md;
        // three-term brace sum collapses to plain integer arithmetic
        (-(xi * w % md) + (xi * b % md) + w).rem_euclid(md)
    }

    fn sigma_oracle(m: u32, xi: i64, u: i64, v: i64, a: i64, b: i64) -> i64 {
        let md = 1i64 << m;
        let modinv = |x: i64| (1..md).step_by(2).find(|&y| (y * x) % md == 1).unwrap();
        let t1 = modinv(u);
        let t2 = xi * a % md * modinv(u) % md * v % md;
        let t3 = a * b % md * xi % md * v % md;
        (t1 - t2 + t3).rem_euclid(md)
    }

    #[test]
    fn cyclic_brace_carriers() {
        assert_eq!(cyclic_brace(1).unwrap().carrier.labels, Some(vec![1]));
        assert_eq!(cyclic_brace(2).unwrap().carrier.labels, Some(vec![1, 3]));
        assert_eq!(
            cyclic_brace(3).unwrap().carrier.labels,
            Some(vec![1, 3, 5, 7])
        );
    }

    #[test]
    fn cyclic_brace_is_two_sided_with_abelian_add() {
        let br = cyclic_brace(3).unwrap();
        assert!(br.is_abelian_add());
        assert!(br.is_commutative_mul());
        // two-sided law: (b + c) ∘ a = b∘a − a + c∘a
        let n = br.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = br.mul(br.add(b, c), a);
                    let rhs = br.add(br.add(br.mul(b, a), br.neg(a)), br.mul(c, a));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn trivial_brace_on_z4() {
        // (Z/4, +) with ∘ = +
        let n = 4;
        let table: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a + b) % n))
            .collect();
        assert!(check_skew_brace(&table, &table, n).holds);
    }

    #[test]
    fn broken_associativity_detected() {
        let br = cyclic_brace(3).unwrap();
        let (add, mul) = br.tables();
        let mut bad = mul.to_vec();
        bad[5] = (bad[5] + 1) % br.n();
        let v = check_skew_brace(add, &bad, br.n());
        assert!(!v.holds);
    }

    /// S3 as a permutation group, with + = ∘ (the trivial skew brace on a
    /// nonabelian group).
    fn s3_trivial_skew_brace() -> SkewBrace {
        let perms: Vec<[usize; 3]> = {
            let mut out = vec![];
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let p = [a, b, c];
                        let mut seen = [false; 3];
                        p.iter().for_each(|&x| seen[x] = true);
                        if seen.iter().all(|&s| s) {
                            out.push(p);
                        }
                    }
                }
            }
            out
        };
        let n = perms.len();
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let table: Vec<usize> = (0..n)
            .flat_map(|i| {
                let perms = perms.clone();
                (0..n).map(move |j| {
                    let r = compose(&perms[i], &perms[j]);
                    perms.iter().position(|&p| p == r).unwrap()
                })
            })
            .collect();
        SkewBrace::new(Carrier::new(n).unwrap(), table.clone(), table).unwrap()
    }

    #[test]
    fn nonabelian_skew_brace_with_non_central_z_fails_admissibility() {
        let br = s3_trivial_skew_brace();
        assert!(!br.is_abelian_add());
        // find a non-central element of S3
        let n = br.n();
        let z = (0..n)
            .find(|&z| (0..n).any(|a| br.add(z, a) != br.add(a, z)))
            .unwrap();
        let y = ParamSubset::new(vec![z], n).unwrap();
        let adm = check_admissible_y(&br, &y, br.identity, AdmissibilityMode::Rack);
        assert!(!adm.verdict.holds);
        assert!(!adm.y_add_central);
    }

    #[test]
    fn identity_singleton_y_is_always_admissible() {
        for br in [s3_trivial_skew_brace(), cyclic_brace(3).unwrap()] {
            let y = ParamSubset::new(vec![br.identity], br.n()).unwrap();
            let adm = check_admissible_y(&br, &y, br.identity, AdmissibilityMode::Twist);
            assert!(adm.verdict.holds, "identity Y should be admissible");
        }
    }

    #[test]
    fn full_y_on_cyclic_brace_admissible_both_modes() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        assert!(
            check_admissible_y(&br, &y, xi, AdmissibilityMode::Rack)
                .verdict
                .holds
        );
        assert!(
            check_admissible_y(&br, &y, xi, AdmissibilityMode::Twist)
                .verdict
                .holds
        );
    }

    #[test]
    fn mod8_shelf_reference_values() {
        // X = U(Z/8), ξ = 3: 1 ▷_{13} 3 = 3 and 1 ▷_{15} 3 = 7
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let i = |l: i64| br.carrier.index_of(l).unwrap();
        assert_eq!(br.carrier.label(shelf.apply(i(1), i(3), i(1), i(3))), 3);
        assert_eq!(br.carrier.label(shelf.apply(i(1), i(5), i(1), i(3))), 7);
    }

    #[test]
    fn brace_shelf_matches_modular_oracle() {
        for m in 1..=4u32 {
            let br = cyclic_brace(m).unwrap();
            let y = ParamSubset::full(br.n());
            let labels = br.carrier.labels.clone().unwrap();
            for &xi_l in &labels {
                let xi = br.carrier.index_of(xi_l).unwrap();
                let shelf = brace_shelf(&br, &y, xi).unwrap();
                for (zi, &u) in labels.iter().enumerate() {
                    for (zj, &v) in labels.iter().enumerate() {
                        for (a, &al) in labels.iter().enumerate() {
                            for (b, &bl) in labels.iter().enumerate() {
                                let got = br.carrier.label(shelf.apply(zi, zj, a, b));
                                assert_eq!(got, shelf_oracle(m, xi_l, u, v, al, bl));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_shelf_inverse_inverts_the_table() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let inv = brace_shelf_inverse(&br, &y, xi).unwrap();
        let n = br.n();
        for zi in 0..n {
            for zj in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(inv.apply(zi, zj, a, shelf.apply(zi, zj, a, b)), b);
                        assert_eq!(shelf.apply(zi, zj, a, inv.apply(zi, zj, a, b)), b);
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_brace_with_identity_xi_gives_trivial_shelf() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let shelf = brace_shelf(&br, &y, br.identity).unwrap();
        let n = br.n();
        for zi in 0..n {
            for zj in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        assert_eq!(shelf.apply(zi, zj, a, b), b);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_reference_value_and_oracle() {
        // U(Z/8), ξ = 1: σ^{(1,3)}_3(5) = 5, against the direct modular oracle
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let (sigma, _tau) = brace_sigma_tau(&br, &y, br.identity).unwrap();
        let i = |l: i64| br.carrier.index_of(l).unwrap();
        assert_eq!(br.carrier.label(sigma.apply(i(1), i(3), i(3), i(5))), 5);
        assert_eq!(sigma_oracle(3, 1, 1, 3, 3, 5), 5);
        // full table agreement with the oracle
        let labels = br.carrier.labels.clone().unwrap();
        for (zi, &u) in labels.iter().enumerate() {
            for (zj, &v) in labels.iter().enumerate() {
                for (a, &al) in labels.iter().enumerate() {
                    for (b, &bl) in labels.iter().enumerate() {
                        let got = br.carrier.label(sigma.apply(zi, zj, a, b));
                        assert_eq!(got, sigma_oracle(3, 1, u, v, al, bl));
                    }
                }
            }
        }
    }

    #[test]
    fn matched_product_identity_exhaustive() {
        // σ^{z_ij}_a(b) ∘ τ^{z_ij}_b(a) = a ∘ b for all inputs
        for m in 2..=3u32 {
            let br = cyclic_brace(m).unwrap();
            let y = ParamSubset::full(br.n());
            for xi in 0..br.n() {
                let (sigma, tau) = brace_sigma_tau(&br, &y, xi).unwrap();
                let n = br.n();
                for zi in 0..n {
                    for zj in 0..n {
                        for a in 0..n {
                            for b in 0..n {
                                let s = sigma.apply(zi, zj, a, b);
                                let t = tau.apply(zi, zj, b, a);
                                assert_eq!(br.mul(s, t), br.mul(a, b));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_closed_form_inverse_matches_table_inverse() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        for xi in 0..br.n() {
            let (sigma, _) = brace_sigma_tau(&br, &y, xi).unwrap();
            let n = br.n();
            for zi in 0..n {
                for zj in 0..n {
                    for a in 0..n {
                        let table_inv = sigma.endo(zi, zj, a).invert().unwrap();
                        for b in 0..n {
                            let closed =
                                sigma_inverse_general(&br, xi, y.indices[zi], y.indices[zj], a, b);
                            assert_eq!(table_inv.apply(b), closed);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tau_closed_form_oracle() {
        // τ^{z_ij}_b(a) = s⁻¹∘a∘z_i⁻¹ − s⁻¹∘ξ⁻¹∘z_i⁻¹∘z_j⁻¹ + ξ⁻¹∘z_j⁻¹
        // with s = σ^{z_ij}_a(b); an independent route to the same table.
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        for xi in [0usize, 1] {
            let (sigma, tau) = brace_sigma_tau(&br, &y, xi).unwrap();
            let n = br.n();
            for zi in 0..n {
                for zj in 0..n {
                    let (u, v) = (y.indices[zi], y.indices[zj]);
                    for a in 0..n {
                        for b in 0..n {
                            let s = sigma.apply(zi, zj, a, b);
                            let si = br.inv(s);
                            let xinv = br.inv(xi);
                            let t1 = br.mul_chain(&[si, a, br.inv(u)]);
                            let t2 = br.mul_chain(&[si, xinv, br.inv(u), br.inv(v)]);
                            let t3 = br.mul(xinv, br.inv(v));
                            let closed = br.add_chain(&[t1, br.neg(t2), t3]);
                            assert_eq!(tau.apply(zi, zj, b, a), closed);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_brace_sigma_tau() {
        let br = cyclic_brace(1).unwrap();
        let y = ParamSubset::full(1);
        let (sigma, tau) = brace_sigma_tau(&br, &y, 0).unwrap();
        assert_eq!(sigma.apply(0, 0, 0, 0), 0);
        assert_eq!(tau.apply(0, 0, 0, 0), 0);
    }

    #[test]
    fn bullet_exchange_identity_exhaustive() {
        // a •_{z_ji} b = b •_{z_ij} (b ▷_{z_ij} a)
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        for xi in 0..br.n() {
            let bullet = brace_bullet(&br, &y, xi).unwrap();
            let shelf = brace_shelf(&br, &y, xi).unwrap();
            let n = br.n();
            for zi in 0..n {
                for zj in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            let lhs = bullet.apply(zj, zi, a, b);
                            let rhs = bullet.apply(zi, zj, b, shelf.apply(zi, zj, b, a));
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bullet_shelf_composition_identity_with_identity_parameter() {
        // brace case with ξ = identity:
        // b ▷_{z_ik}(a ▷_{z_jk} c) = (a •_{z_ji} b) ▷_{(1, z_k)} (ξ ∘ c)
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let one = br.identity;
        let xi = br.identity;
        let bullet = brace_bullet(&br, &y, xi).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let n = br.n();
        for zi in 0..n {
            for zj in 0..n {
                for zk in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                let lhs = shelf.apply(zi, zk, b, shelf.apply(zj, zk, a, c));
                                let rhs = shelf_op_general(
                                    &br,
                                    xi,
                                    one,
                                    y.indices[zk],
                                    bullet.apply(zj, zi, a, b),
                                    br.mul(xi, c),
                                );
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shelf_composition_factors_through_bullet_for_all_xi() {
        // For every ξ, b ▷_{z_ik}(a ▷_{z_jk} c) depends on (a, b) only
        // through a •_{z_ji} b, so a well-defined ĝ exists even when the
        // closed shelf form of ĝ requires ξ = 1.
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let n = br.n();
        for xi in 0..n {
            let bullet = brace_bullet(&br, &y, xi).unwrap();
            let shelf = brace_shelf(&br, &y, xi).unwrap();
            for zi in 0..n {
                for zj in 0..n {
                    for zk in 0..n {
                        for c in 0..n {
                            let mut by_u = vec![usize::MAX; n];
                            for a in 0..n {
                                for b in 0..n {
                                    let u = bullet.apply(zj, zi, a, b);
                                    let v = shelf.apply(zi, zk, b, shelf.apply(zj, zk, a, c));
                                    if by_u[u] == usize::MAX {
                                        by_u[u] = v;
                                    } else {
                                        assert_eq!(by_u[u], v, "xi={xi}");
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn brace_shelf_is_rack_for_all_small_exponents() {
        for m in 1..=4u32 {
            let br = cyclic_brace(m).unwrap();
            let y = ParamSubset::full(br.n());
            for xi in 0..br.n() {
                let shelf = brace_shelf(&br, &y, xi).unwrap();
                assert!(check_p_shelf(&shelf.op).holds);
                assert!(shelf.is_rack());
            }
        }
    }

    #[test]
    fn brace_shelf_is_rack_for_every_parameter_subset() {
        // every non-empty Y is admissible on the abelian cyclic braces;
        // the induced shelf is a rack for each (Y, xi) combination
        for m in 2..=3u32 {
            let br = cyclic_brace(m).unwrap();
            let n = br.n();
            for mask in 1u32..(1 << n) {
                let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                let y = ParamSubset::new(indices, n).unwrap();
                for xi in 0..n {
                    let shelf = brace_shelf(&br, &y, xi).unwrap();
                    assert!(shelf.is_rack());
                    assert!(check_p_shelf(&shelf.op).holds);
                }
            }
        }
    }
}
