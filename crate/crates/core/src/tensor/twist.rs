//! The Drinfel'd twist layer in the fundamental representation: the
//! two-leg twist `F^{z_ij} = Σ_b h_b ⊗ (w_b^{z_ij})^{-1}`, its three-leg
//! factorizations, the telescoping n-fold twist with its closed form, the
//! collapsed product form under a group hypothesis on the `w`-family, and
//! the twisted operator `R^{F z_ij}`.

use super::{check_tensor_ybe, IntMatrix, IntScalar, RepBundle, TensorOp};
use crate::error::{Counterexample, Error, Result, Verdict};

impl RepBundle {
    /// `F^{z_ij} = Σ_b h_b ⊗ (w_b^{z_ij})^{-1}`.
    pub fn f2(&self, zi: usize, zj: usize) -> Result<TensorOp> {
        let s = self.sigma_ref()?;
        let n = self.n();
        let mut triplets = Vec::with_capacity(n * n);
        for b in 0..n {
            for c in 0..n {
                triplets.push((
                    (b * n + c) as u32,
                    (b * n + s.apply(zj, zi, b, c)) as u32,
                    IntScalar::ONE,
                ));
            }
        }
        Ok(TensorOp {
            leg_dim: n,
            leg_count: 2,
            mat: IntMatrix::from_triplets(n * n, n * n, triplets),
        })
    }

    /// `(F^{z_ij})^{-1} = Σ_b h_b ⊗ w_b^{z_ij}`.
    pub fn f2_inv(&self, zi: usize, zj: usize) -> Result<TensorOp> {
        let s = self.sigma_ref()?;
        let n = self.n();
        let mut triplets = Vec::with_capacity(n * n);
        for b in 0..n {
            for c in 0..n {
                triplets.push((
                    (b * n + s.apply(zj, zi, b, c)) as u32,
                    (b * n + c) as u32,
                    IntScalar::ONE,
                ));
            }
        }
        Ok(TensorOp {
            leg_dim: n,
            leg_count: 2,
            mat: IntMatrix::from_triplets(n * n, n * n, triplets),
        })
    }

    /// Twisted operator by conjugation:
    /// `R^{F z_ij} = (F^{z_ji})^{(op)} R^{z_ij} (F^{z_ij})^{-1}`.
    pub fn rf_conjugated(&self, zi: usize, zj: usize) -> Result<TensorOp> {
        let fop = self.f2(zj, zi)?.op2()?;
        let r = self.r_rack_op(zi, zj);
        let finv = self.f2_inv(zi, zj)?;
        fop.mul(&r)?.mul(&finv)
    }

    /// `F^{z_1..}_{1,2..L} = Σ_a h_a ⊗ (w_a^{z_1 z_2})^{-1} ⊗ ... ⊗
    /// (w_a^{z_1 z_L})^{-1}` on `L` legs.
    pub fn f_head(&self, z: &[usize]) -> Result<TensorOp> {
        let n = self.n();
        let l = z.len();
        let mut acc = TensorOp {
            leg_dim: n,
            leg_count: l,
            mat: IntMatrix::zero(n.pow(l as u32), n.pow(l as u32)),
        };
        for a in 0..n {
            let h = self.h_mat(a);
            let mut factors: Vec<(usize, IntMatrix)> = vec![(0, h)];
            for leg in 1..l {
                factors.push((leg, self.w_inv_mat(z[0], z[leg], a)?));
            }
            let refs: Vec<(usize, &IntMatrix)> = factors.iter().map(|(p, m)| (*p, m)).collect();
            acc = acc.add(&TensorOp::from_leg_factors(n, l, &refs)?)?;
        }
        Ok(acc)
    }

    /// The chain `σ^{(z_t, z_{d})}_{a_d}( ... σ^{(z_t, z_{ℓ-1})}_{a_{ℓ-1}}(x))`
    /// folding positions `d, .., ℓ-1` around `x` (1-based positions into
    /// `z`, tuple `a` 0-based).
    fn sigma_chain(
        &self,
        z: &[usize],
        t: usize,
        upto: usize,
        a: &[usize],
        x: usize,
    ) -> Result<usize> {
        let s = self.sigma_ref()?;
        let mut v = x;
        for d in (1..=upto).rev() {
            v = s.apply(z[t - 1], z[d - 1], a[d - 1], v);
        }
        Ok(v)
    }

    /// `F*^{z_1..}_{1 2 .. L-1, L}`: diagonal twisted projectors on the
    /// first `L-1` legs and a stacked inverse-`w` product on the last.
    pub fn f_star(&self, z: &[usize]) -> Result<TensorOp> {
        let n = self.n();
        let l = z.len();
        let dim = n.pow(l as u32);
        let mut acc = TensorOp {
            leg_dim: n,
            leg_count: l,
            mat: IntMatrix::zero(dim, dim),
        };
        let tuples = n.pow((l - 1) as u32);
        for code in 0..tuples {
            let mut a = vec![0usize; l - 1];
            let mut rem = code;
            for slot in (0..l - 1).rev() {
                a[slot] = rem % n;
                rem /= n;
            }
            let mut factors: Vec<(usize, IntMatrix)> = Vec::with_capacity(l);
            for ell in 1..l {
                let u = self.sigma_chain(z, ell, ell - 1, &a, a[ell - 1])?;
                factors.push((ell - 1, self.h_mat(u)));
            }
            // last leg: (w_{a_{L-1}}^{z_{L-1} L})^{-1} ... (w_{a_1}^{z_1 L})^{-1}
            let mut last = IntMatrix::identity(n);
            for d in (1..l).rev() {
                last = last.mul(&self.w_inv_mat(z[d - 1], z[l - 1], a[d - 1])?)?;
            }
            factors.push((l - 1, last));
            let refs: Vec<(usize, &IntMatrix)> = factors.iter().map(|(p, m)| (*p, m)).collect();
            acc = acc.add(&TensorOp::from_leg_factors(n, l, &refs)?)?;
        }
        Ok(acc)
    }

    /// Explicit telescoped n-fold twist.
    pub fn nfold_explicit(&self, z: &[usize]) -> Result<TensorOp> {
        let n = self.n();
        let l = z.len();
        let dim = n.pow(l as u32);
        let mut acc = TensorOp {
            leg_dim: n,
            leg_count: l,
            mat: IntMatrix::zero(dim, dim),
        };
        let tuples = n.pow((l - 1) as u32);
        for code in 0..tuples {
            let mut a = vec![0usize; l - 1];
            let mut rem = code;
            for slot in (0..l - 1).rev() {
                a[slot] = rem % n;
                rem /= n;
            }
            let mut factors: Vec<(usize, IntMatrix)> = vec![(0, self.h_mat(a[0]))];
            // middle legs: h_{a_{ℓ+1}} (w_{a_ℓ}^{z_ℓ,ℓ+1})^{-1} ... (w_{a_1}^{z_1,ℓ+1})^{-1}
            for leg in 1..l - 1 {
                let mut f = self.h_mat(a[leg]);
                for d in (1..=leg).rev() {
                    f = f.mul(&self.w_inv_mat(z[d - 1], z[leg], a[d - 1])?)?;
                }
                factors.push((leg, f));
            }
            // last leg: (w_{a_{L-1}}^{z_{L-1},L})^{-1} ... (w_{a_1}^{z_1,L})^{-1}
            let mut last = IntMatrix::identity(n);
            for d in (1..l).rev() {
                last = last.mul(&self.w_inv_mat(z[d - 1], z[l - 1], a[d - 1])?)?;
            }
            factors.push((l - 1, last));
            let refs: Vec<(usize, &IntMatrix)> = factors.iter().map(|(p, m)| (*p, m)).collect();
            acc = acc.add(&TensorOp::from_leg_factors(n, l, &refs)?)?;
        }
        Ok(acc)
    }

    /// n-fold twist by the head recursion
    /// `F_{1..L} = F_{2..L} F_{1,2..L}` (base: the two-leg twist).
    pub fn nfold_recursive(&self, z: &[usize]) -> Result<TensorOp> {
        let l = z.len();
        if l == 2 {
            return self.f2(z[0], z[1]);
        }
        let tail = self.nfold_recursive(&z[1..])?;
        let tail_embedded = tail.embed(l, &(1..l).collect::<Vec<_>>())?;
        tail_embedded.mul(&self.f_head(z)?)
    }

    /// n-fold twist by the tail recursion `F_{1..L} = F_{1..L-1} F*_{1..L-1,L}`.
    pub fn nfold_recursive_star(&self, z: &[usize]) -> Result<TensorOp> {
        let l = z.len();
        if l == 2 {
            return self.f2(z[0], z[1]);
        }
        let head = self.nfold_recursive_star(&z[..l - 1])?;
        let head_embedded = head.embed(l, &(0..l - 1).collect::<Vec<_>>())?;
        head_embedded.mul(&self.f_star(z)?)
    }

    /// Closed form of the n-fold twist in representation: entry per tuple
    /// `(a_1..a_L)` sending leg `ℓ` from `a_ℓ` to the σ-chain image.
    pub fn nfold_closed(&self, z: &[usize]) -> Result<TensorOp> {
        let n = self.n();
        let l = z.len();
        let dim = n.pow(l as u32);
        let mut triplets = Vec::with_capacity(dim);
        for code in 0..dim {
            let mut a = vec![0usize; l];
            let mut rem = code;
            for slot in (0..l).rev() {
                a[slot] = rem % n;
                rem /= n;
            }
            let mut row = 0usize;
            let mut col = 0usize;
            for ell in 1..=l {
                let v = self.sigma_chain(z, ell, ell - 1, &a, a[ell - 1])?;
                row = row * n + a[ell - 1];
                col = col * n + v;
            }
            triplets.push((row as u32, col as u32, IntScalar::ONE));
        }
        Ok(TensorOp {
            leg_dim: n,
            leg_count: l,
            mat: IntMatrix::from_triplets(dim, dim, triplets),
        })
    }

    /// Three-leg twist with parameter/leg roles assigned simultaneously:
    /// the canonical formula evaluated at parameters `(z_a, z_b, z_c)`
    /// placed on legs `(p_a, p_b, p_c)`.
    pub fn f3_general(
        &self,
        z: (usize, usize, usize),
        legs: (usize, usize, usize),
    ) -> Result<TensorOp> {
        let n = self.n();
        let (za, zb, zc) = z;
        let (pa, pb, pc) = legs;
        let dim = n.pow(3);
        let mut acc = TensorOp {
            leg_dim: n,
            leg_count: 3,
            mat: IntMatrix::zero(dim, dim),
        };
        for xa in 0..n {
            for xb in 0..n {
                let fa = self.h_mat(xa);
                let fb = self.h_mat(xb).mul(&self.w_inv_mat(za, zb, xa)?)?;
                let fc = self
                    .w_inv_mat(zb, zc, xb)?
                    .mul(&self.w_inv_mat(za, zc, xa)?)?;
                let term = TensorOp::from_leg_factors(n, 3, &[(pa, &fa), (pb, &fb), (pc, &fc)])?;
                acc = acc.add(&term)?;
            }
        }
        Ok(acc)
    }
}

/// Factorization of the three-fold twist: the two assembly orders
/// agree with the explicit formula for every parameter triple.
pub fn check_twist_factorization(bundle: &RepBundle) -> Result<Verdict> {
    let m = bundle.m();
    let mut checked = 0u64;
    for z1 in 0..m {
        for z2 in 0..m {
            for z3 in 0..m {
                checked += 1;
                let z = [z1, z2, z3];
                let via_star = bundle
                    .f2(z1, z2)?
                    .embed(3, &[0, 1])?
                    .mul(&bundle.f_star(&z)?)?;
                let via_head = bundle
                    .f2(z2, z3)?
                    .embed(3, &[1, 2])?
                    .mul(&bundle.f_head(&z)?)?;
                let explicit = bundle.nfold_explicit(&z)?;
                if via_star != via_head || via_star != explicit {
                    let d = via_star
                        .mat
                        .first_difference(&via_head.mat)
                        .or_else(|| via_star.mat.first_difference(&explicit.mat))
                        .unwrap();
                    return Ok(Verdict::fail(
                        Counterexample::new(
                            "twist-factorization",
                            vec![z1, z2, z3],
                            vec![d.0, d.1],
                            d.2,
                            d.3,
                        ),
                        checked,
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// Intertwining of the three-fold twist with the rack operators:
/// `F^{z_icb}_{(acb)} R^{z_bc}_{bc} = R^{F z_bc}_{bc} F^{z_abc}_{(abc)}`
/// instantiated in both leg arrangements for every parameter triple.
pub fn check_twist_intertwining(bundle: &RepBundle) -> Result<Verdict> {
    let m = bundle.m();
    let mut checked = 0u64;
    for z1 in 0..m {
        for z2 in 0..m {
            for z3 in 0..m {
                checked += 1;
                let f123 = bundle.nfold_explicit(&[z1, z2, z3])?;
                // (i) legs (1,3,2): F^{z132}_{132} R^{z23}_{23} = R^{F z23}_{23} F^{z123}_{123}
                let f132 = bundle.f3_general((z1, z3, z2), (0, 2, 1))?;
                let r23 = bundle.r_rack_op(z2, z3).embed(3, &[1, 2])?;
                let rf23 = bundle.r_twisted_op(z2, z3)?.embed(3, &[1, 2])?;
                let lhs1 = f132.mul(&r23)?;
                let rhs1 = rf23.mul(&f123)?;
                if lhs1 != rhs1 {
                    let d = lhs1.mat.first_difference(&rhs1.mat).unwrap();
                    return Ok(Verdict::fail(
                        Counterexample::new(
                            "twist-intertwine-23",
                            vec![z1, z2, z3],
                            vec![d.0, d.1],
                            d.2,
                            d.3,
                        ),
                        checked,
                    ));
                }
                // (ii) legs (2,1,3): F^{z213}_{213} R^{z12}_{12} = R^{F z12}_{12} F^{z123}_{123}
                let f213 = bundle.f3_general((z2, z1, z3), (1, 0, 2))?;
                let r12 = bundle.r_rack_op(z1, z2).embed(3, &[0, 1])?;
                let rf12 = bundle.r_twisted_op(z1, z2)?.embed(3, &[0, 1])?;
                let lhs2 = f213.mul(&r12)?;
                let rhs2 = rf12.mul(&f123)?;
                if lhs2 != rhs2 {
                    let d = lhs2.mat.first_difference(&rhs2.mat).unwrap();
                    return Ok(Verdict::fail(
                        Counterexample::new(
                            "twist-intertwine-12",
                            vec![z1, z2, z3],
                            vec![d.0, d.1],
                            d.2,
                            d.3,
                        ),
                        checked,
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// The twisted operator equals the direct set-theoretic formula, passes
/// the tensor Yang-Baxter equation, inverts by total transposition when
/// the set solution is bijective, and collapses to a reversible pair when
/// the shelf is trivial.
pub fn check_twisted_r(bundle: &RepBundle) -> Result<Verdict> {
    let (n, m) = (bundle.n(), bundle.m());
    let mut checked = 0u64;
    let mut rfs = Vec::with_capacity(m * m);
    for zi in 0..m {
        for zj in 0..m {
            checked += 1;
            let conj = bundle.rf_conjugated(zi, zj)?;
            let direct = bundle.r_twisted_op(zi, zj)?;
            if conj != direct {
                let d = conj.mat.first_difference(&direct.mat).unwrap();
                return Ok(Verdict::fail(
                    Counterexample::new("twisted-r-form", vec![zi, zj], vec![d.0, d.1], d.2, d.3),
                    checked,
                ));
            }
            rfs.push(direct);
        }
    }
    let ybe = check_tensor_ybe(&rfs, m)?;
    if !ybe.holds {
        return Ok(ybe);
    }
    checked += ybe.checked;
    // transpose-inverse for bijective set solutions
    let sol = bundle.to_solution()?;
    if crate::solutions::classify(&sol).invertible {
        let id = TensorOp::identity(n, 2);
        for (s, rf) in rfs.iter().enumerate() {
            checked += 1;
            let p = rf.mul(&rf.transpose())?;
            if p != id {
                return Ok(Verdict::fail(
                    Counterexample::new(
                        "twisted-r-transpose-inverse",
                        vec![s / m, s % m],
                        vec![],
                        "R^F (R^F)^T",
                        "identity",
                    ),
                    checked,
                ));
            }
        }
    }
    // trivial shelf: the twisted pair composes to the identity
    let trivial = {
        let mut t = true;
        'out: for zi in 0..m {
            for zj in 0..m {
                for a in 0..n {
                    for b in 0..n {
                        if bundle.shelf.apply(zi, zj, a, b) != b {
                            t = false;
                            break 'out;
                        }
                    }
                }
            }
        }
        t
    };
    if trivial {
        let id = TensorOp::identity(n, 2);
        for z1 in 0..m {
            for z2 in 0..m {
                checked += 1;
                let r12 = &rfs[z1 * m + z2];
                let r21_flipped = rfs[z2 * m + z1].op2()?;
                let p = r12.mul(&r21_flipped)?;
                if p != id {
                    return Ok(Verdict::fail(
                        Counterexample::new(
                            "twisted-r-reversible",
                            vec![z1, z2],
                            vec![],
                            "R^F_12 R^F_21",
                            "identity",
                        ),
                        checked,
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// Group-collapse hypothesis on the `w`-family:
/// `w_a^{(z_j, z_k)} w_b^{(z_i, z_k)} = w_{a∘b}^{(z_i∘z_j, z_k)}`. Requires
/// the bundle's group table and a parameter set closed under the product.
pub fn check_w_collapse(bundle: &RepBundle) -> Result<Verdict> {
    let group = bundle
        .group
        .as_ref()
        .ok_or_else(|| Error::Invalid("bundle carries no group table".into()))?;
    let (n, m) = (bundle.n(), bundle.m());
    let params = &bundle.shelf.op.params;
    let mul = |a: usize, b: usize| group[a * n + b];
    let mut checked = 0u64;
    for zi in 0..m {
        for zj in 0..m {
            let prod = mul(params.indices[zi], params.indices[zj]);
            let Some(zij) = params.slot_of(prod) else {
                return Err(Error::Invalid(
                    "parameter set is not closed under the group product".into(),
                ));
            };
            for zk in 0..m {
                for a in 0..n {
                    for b in 0..n {
                        checked += 1;
                        let lhs = bundle.w_mat(zj, zk, a)?.mul(&bundle.w_mat(zi, zk, b)?)?;
                        let rhs = bundle.w_mat(zij, zk, mul(a, b))?;
                        if lhs != rhs {
                            return Ok(Verdict::fail(
                                Counterexample::new(
                                    "w-collapse",
                                    vec![zi, zj, zk],
                                    vec![a, b],
                                    "w w",
                                    "w collapsed",
                                ),
                                checked,
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// Collapsed n-fold twist under the group hypothesis: leg `ℓ` maps `a_ℓ`
/// to `σ^{(z_ℓ, z_1∘..∘z_{ℓ-1})}_{a_1∘..∘a_{ℓ-1}}(a_ℓ)`.
pub fn nfold_collapsed(bundle: &RepBundle, z: &[usize]) -> Result<TensorOp> {
    let group = bundle
        .group
        .as_ref()
        .ok_or_else(|| Error::Invalid("bundle carries no group table".into()))?;
    let s = bundle.sigma_ref()?;
    let n = bundle.n();
    let l = z.len();
    let params = &bundle.shelf.op.params;
    let mul = |a: usize, b: usize| group[a * n + b];
    let dim = n.pow(l as u32);
    let mut triplets = Vec::with_capacity(dim);
    for code in 0..dim {
        let mut a = vec![0usize; l];
        let mut rem = code;
        for slot in (0..l).rev() {
            a[slot] = rem % n;
            rem /= n;
        }
        let mut row = 0usize;
        let mut col = 0usize;
        for ell in 1..=l {
            let v = if ell == 1 {
                a[0]
            } else {
                let mut zprod = params.indices[z[0]];
                let mut aprod = a[0];
                for d in 1..ell - 1 {
                    zprod = mul(zprod, params.indices[z[d]]);
                    aprod = mul(aprod, a[d]);
                }
                let zslot = params.slot_of(zprod).ok_or_else(|| {
                    Error::Invalid("parameter set is not closed under the group product".into())
                })?;
                s.apply(z[ell - 1], zslot, aprod, a[ell - 1])
            };
            row = row * n + a[ell - 1];
            col = col * n + v;
        }
        triplets.push((row as u32, col as u32, IntScalar::ONE));
    }
    Ok(TensorOp {
        leg_dim: n,
        leg_count: l,
        mat: IntMatrix::from_triplets(dim, dim, triplets),
    })
}

/// n-fold twist consistency at a given leg count: the two recursions, the
/// explicit telescoped sum, and the closed form agree for every parameter
/// assignment; under the group hypothesis the collapsed form agrees too.
pub fn check_nfold(bundle: &RepBundle, legs: usize, with_collapse: bool) -> Result<Verdict> {
    let m = bundle.m();
    let assignments = m.pow(legs as u32);
    let mut checked = 0u64;
    let collapse_ok = if with_collapse {
        let v = check_w_collapse(bundle)?;
        if !v.holds {
            return Ok(v);
        }
        true
    } else {
        false
    };
    for code in 0..assignments {
        checked += 1;
        let mut z = vec![0usize; legs];
        let mut rem = code;
        for slot in (0..legs).rev() {
            z[slot] = rem % m;
            rem /= m;
        }
        let explicit = bundle.nfold_explicit(&z)?;
        let rec_head = bundle.nfold_recursive(&z)?;
        let rec_star = bundle.nfold_recursive_star(&z)?;
        let closed = bundle.nfold_closed(&z)?;
        let all_equal = explicit == rec_head && explicit == rec_star && explicit == closed;
        if !all_equal {
            return Ok(Verdict::fail(
                Counterexample::new(
                    "nfold-twist",
                    z.clone(),
                    vec![],
                    "recursive/explicit/closed forms",
                    "disagree",
                ),
                checked,
            ));
        }
        if collapse_ok {
            let collapsed = nfold_collapsed(bundle, &z)?;
            if collapsed != explicit {
                return Ok(Verdict::fail(
                    Counterexample::new(
                        "nfold-collapsed",
                        z.clone(),
                        vec![],
                        "collapsed form",
                        "telescoped form",
                    ),
                    checked,
                ));
            }
        }
    }
    Ok(Verdict::pass(checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braces::{brace_shelf, brace_sigma_tau, cyclic_brace};
    use crate::carrier::ParamSubset;
    use crate::tensor::linearize;

    fn mod8_bundle(xi_label: i64) -> RepBundle {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(xi_label).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let (sigma, _) = brace_sigma_tau(&br, &y, xi).unwrap();
        RepBundle::fundamental_rep(shelf, Some(sigma))
            .unwrap()
            .with_carrier(br.carrier.clone())
            .with_group(br.tables().1.to_vec())
    }

    #[test]
    fn f2_inverse_is_inverse() {
        let bundle = mod8_bundle(3);
        let id = TensorOp::identity(bundle.n(), 2);
        for zi in 0..bundle.m() {
            for zj in 0..bundle.m() {
                let f = bundle.f2(zi, zj).unwrap();
                let fi = bundle.f2_inv(zi, zj).unwrap();
                assert_eq!(f.mul(&fi).unwrap(), id);
                assert_eq!(fi.mul(&f).unwrap(), id);
            }
        }
    }

    #[test]
    fn trivial_sigma_gives_identity_twist() {
        let shelf = crate::shelves::PShelf::trivial(3, ParamSubset { indices: vec![0] });
        let sigma = crate::carrier::ParamFamily::identity(3, ParamSubset { indices: vec![0] });
        let bundle = RepBundle::fundamental_rep(shelf, Some(sigma)).unwrap();
        assert_eq!(bundle.f2(0, 0).unwrap(), TensorOp::identity(3, 2));
        assert_eq!(
            bundle.rf_conjugated(0, 0).unwrap(),
            TensorOp::identity(3, 2)
        );
    }

    #[test]
    fn twisted_r_checks_mod8() {
        for xi in [1i64, 3] {
            let bundle = mod8_bundle(xi);
            let v = check_twisted_r(&bundle).unwrap();
            assert!(v.holds, "xi = {xi}: {:?}", v.counterexample);
        }
    }

    #[test]
    fn twist_factorization_mod8() {
        for xi in [1i64, 3] {
            let bundle = mod8_bundle(xi);
            let v = check_twist_factorization(&bundle).unwrap();
            assert!(v.holds, "xi = {xi}: {:?}", v.counterexample);
        }
    }

    #[test]
    fn twist_intertwining_mod8() {
        for xi in [1i64, 3] {
            let bundle = mod8_bundle(xi);
            let v = check_twist_intertwining(&bundle).unwrap();
            assert!(v.holds, "xi = {xi}: {:?}", v.counterexample);
        }
    }

    #[test]
    fn nfold_three_and_four_legs_mod8() {
        for xi in [1i64, 3] {
            let bundle = mod8_bundle(xi);
            // collapse hypothesis holds for xi = 1 (unit-decorated family)
            let with_collapse = xi == 1;
            let v3 = check_nfold(&bundle, 3, with_collapse).unwrap();
            assert!(v3.holds, "xi = {xi} legs 3: {:?}", v3.counterexample);
            let v4 = check_nfold(&bundle, 4, with_collapse).unwrap();
            assert!(v4.holds, "xi = {xi} legs 4: {:?}", v4.counterexample);
        }
    }

    #[test]
    fn w_collapse_holds_only_for_unit_xi() {
        let b1 = mod8_bundle(1);
        assert!(check_w_collapse(&b1).unwrap().holds);
        let b3 = mod8_bundle(3);
        assert!(!check_w_collapse(&b3).unwrap().holds);
    }

    #[test]
    fn twisted_equals_linearized_built_solution() {
        let bundle = mod8_bundle(3);
        let sol = bundle.to_solution().unwrap();
        for zi in 0..bundle.m() {
            for zj in 0..bundle.m() {
                assert_eq!(
                    bundle.rf_conjugated(zi, zj).unwrap(),
                    linearize(&sol, zi, zj)
                );
            }
        }
    }

    #[test]
    fn twisted_equals_linearized_for_enumerated_racks_with_admissible_sigma() {
        // for every enumerated rack on up to three elements (one
        // parameter slot) and every bijective sigma family passing the
        // admissibility conditions, the conjugated twist matches the
        // built solution's linearization entrywise
        use crate::error::Budget;
        use crate::shelves::enumerate_p_shelves;
        use crate::solutions::{build_solution, check_admissible_twist};

        for n in 2..=3usize {
            let racks: Vec<_> = enumerate_p_shelves(n, 1, true, false, Budget::unlimited())
                .unwrap()
                .collect::<crate::Result<Vec<_>>>()
                .unwrap();
            assert!(!racks.is_empty());
            // all sigma families: one permutation of X per subscript a
            let perms: Vec<Vec<usize>> = {
                let mut out = vec![];
                let mut p: Vec<usize> = (0..n).collect();
                permute_all(&mut p, 0, &mut |q| out.push(q.to_vec()));
                out
            };
            let mut admissible_count = 0u32;
            for rack in &racks {
                let shelf = crate::shelves::PShelf::new_unchecked(rack.clone());
                let total = perms.len().pow(n as u32);
                for code in 0..total {
                    let mut picks = Vec::with_capacity(n);
                    let mut rem = code;
                    for _ in 0..n {
                        picks.push(rem % perms.len());
                        rem /= perms.len();
                    }
                    let sigma = crate::carrier::ParamFamily::from_fn(
                        n,
                        ParamSubset { indices: vec![0] },
                        |_, _, a, b| perms[picks[a]][b],
                    );
                    if !check_admissible_twist(&sigma, &shelf).unwrap().holds {
                        continue;
                    }
                    admissible_count += 1;
                    let sol = build_solution(&shelf, &sigma).unwrap();
                    let bundle = RepBundle::fundamental_rep(shelf.clone(), Some(sigma)).unwrap();
                    assert_eq!(bundle.rf_conjugated(0, 0).unwrap(), linearize(&sol, 0, 0));
                }
            }
            assert!(admissible_count > 0, "n = {n} found no admissible twists");
        }
    }

    fn permute_all(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute_all(v, k + 1, f);
            v.swap(k, i);
        }
    }
}
