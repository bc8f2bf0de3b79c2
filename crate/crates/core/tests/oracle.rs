//! Brute-force oracle equivalence.
//!
//! Independent, naively-looped implementations of the Kulkarni–Nomizu
//! product, the derivation product and the Tachibana tensor, written straight
//! from their defining formulas with no code shared with the library paths.
//! Every product of every preset must agree exactly.

mod common;

use solcurv::expr::Expr;
use solcurv::metric::Metric;
use solcurv::report::Pipeline;
use solcurv::tensor::{indices, Tensor};

/// `(A∧E)(Y₁,Y₂,U₁,U₂) = A(Y₁,U₂)E(Y₂,U₁) - A(Y₁,U₁)E(Y₂,U₂)
///                      + A(Y₂,U₁)E(Y₁,U₂) - A(Y₂,U₂)E(Y₁,U₁)`
fn naive_kulkarni(a: &Tensor, e: &Tensor) -> Tensor {
    let n = a.dim();
    let mut out = Tensor::zeros((0, 4), n);
    for y1 in 0..n {
        for y2 in 0..n {
            for u1 in 0..n {
                for u2 in 0..n {
                    let v = a
                        .at(&[y1, u2])
                        .mul(e.at(&[y2, u1]))
                        .sub(&a.at(&[y1, u1]).mul(e.at(&[y2, u2])))
                        .add(&a.at(&[y2, u1]).mul(e.at(&[y1, u2])))
                        .sub(&a.at(&[y2, u2]).mul(e.at(&[y1, u1])));
                    out.set(&[y1, y2, u1, u2], v).unwrap();
                }
            }
        }
    }
    out
}

/// The curvature endomorphism of a (0,4) tensor, spelled out index by index:
/// `ℰ(U₁,U₂)Y = Σ_c g^{cc} E(U₁,U₂,Y,c) ∂_c`.
fn naive_endo(e4: &Tensor, m: &Metric, u1: usize, u2: usize, y: usize, c: usize) -> Expr {
    m.inv(c).unwrap().mul(e4.at(&[u1, u2, y, c]))
}

/// `(E·F)(Y₁,…,Y_k,U₁,U₂) = -Σ_m F(Y₁,…,ℰ(U₁,U₂)Y_m,…,Y_k)`
fn naive_dot(e4: &Tensor, f: &Tensor, m: &Metric) -> Tensor {
    let n = m.dim();
    let k = f.rank();
    let mut out = Tensor::zeros((0, k + 2), n);
    for idx in indices(k + 2, n) {
        let ys = &idx[..k];
        let (u1, u2) = (idx[k], idx[k + 1]);
        let mut v = Expr::zero();
        for mth in 0..k {
            for c in 0..n {
                let mut arg = ys.to_vec();
                arg[mth] = c;
                v = v.sub(&naive_endo(e4, m, u1, u2, ys[mth], c).mul(f.at(&arg)));
            }
        }
        out.set(&idx, v).unwrap();
    }
    out
}

/// `Q(Z,F)(Y₁,…,Y_k,U₁,U₂) = Z(U₁,Y₁)F(U₂,Y₂,…) + … + Z(U₁,Y_k)F(…,U₂)
///                         - Z(U₂,Y₁)F(U₁,…) - … - Z(U₂,Y_k)F(…,U₁)`
fn naive_tachibana(z: &Tensor, f: &Tensor) -> Tensor {
    let n = z.dim();
    let k = f.rank();
    let mut out = Tensor::zeros((0, k + 2), n);
    for idx in indices(k + 2, n) {
        let ys = &idx[..k];
        let (u1, u2) = (idx[k], idx[k + 1]);
        let mut v = Expr::zero();
        for mth in 0..k {
            let mut plus = ys.to_vec();
            plus[mth] = u2;
            v = v.add(&z.at(&[u1, ys[mth]]).mul(f.at(&plus)));
            let mut minus = ys.to_vec();
            minus[mth] = u1;
            v = v.sub(&z.at(&[u2, ys[mth]]).mul(f.at(&minus)));
        }
        out.set(&idx, v).unwrap();
    }
    out
}

fn check_pipeline(p: &Pipeline) {
    let g = p.metric.tensor();
    let label = format!("{} eps {:+}", p.config.preset.name(), p.config.epsilon);

    // Kulkarni–Nomizu against both metric-built products
    let gg = solcurv::products::kulkarni(&g, &g).unwrap();
    assert_eq!(gg, naive_kulkarni(&g, &g), "g∧g mismatch on {label}");
    let gric = solcurv::products::kulkarni(&g, &p.curvature.ric).unwrap();
    assert_eq!(
        gric,
        naive_kulkarni(&g, &p.curvature.ric),
        "g∧Ric mismatch on {label}"
    );

    // the full derivation-product grid
    for (e_name, e_t) in p.curvature.family() {
        for (f_name, f_t) in p.curvature.family() {
            let fast = p.grid.dot(e_name, f_name);
            let slow = naive_dot(e_t, f_t, &p.metric);
            assert_eq!(fast, &slow, "{e_name}·{f_name} mismatch on {label}");
        }
    }

    // the full Tachibana grid
    for (f_name, f_t) in p.curvature.family() {
        let fast = p.grid.q("g", f_name);
        assert_eq!(
            fast,
            &naive_tachibana(&g, f_t),
            "Q(g,{f_name}) mismatch on {label}"
        );
        let fast = p.grid.q("Ric", f_name);
        assert_eq!(
            fast,
            &naive_tachibana(&p.curvature.ric, f_t),
            "Q(Ric,{f_name}) mismatch on {label}"
        );
    }
}

#[test]
fn naive_loops_match_library_paths_on_all_presets() {
    for p in common::all_preset_pipelines() {
        check_pipeline(&p);
    }
}
