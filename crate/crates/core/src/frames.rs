//! Frame systems: synthesis, analysis, Gram and frame operators, tightness,
//! equiangularity, ETF verification, Gram realization, Naimark complements.

use crate::error::{Error, Result};
use crate::geometry::{adjoint_of, discriminant_of, Discriminant, HermitianSpace};
use crate::gf::{Case, Elem, Field};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSystem {
    space: HermitianSpace,
    synthesis: Matrix,
    analysis: Matrix,
    gram: Matrix,
    frame_op: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquiangularParams {
    pub a: Elem,
    pub b: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessReport {
    pub tight: bool,
    pub c: Option<Elem>,
    pub is_frame_for_ambient: bool,
    pub is_frame_for_span: bool,
    pub totally_isotropic_tight: bool,
    pub span_dim: usize,
    pub gram_rank: usize,
    /// Φ = 0: every c satisfies ΦΦ†Φ = cΦ.
    pub c_ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtfReport {
    pub params: EquiangularParams,
    pub c: Option<Elem>,
    pub n: usize,
    pub span_dim: usize,
    pub ambient_dim: usize,
    pub tight: bool,
    pub welch_holds: bool,
    pub triple_sum_target: Option<Elem>,
    pub triple_sum_holds: bool,
    /// Pairs (j, k), j ≠ k, where Σ_ℓ Δ(j,k,ℓ) misses the target.
    pub triple_sum_failures: Vec<(usize, usize)>,
    pub certification_applicable: bool,
    pub certified: Option<bool>,
    pub verdict: bool,
    pub failure_reasons: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GerzonReport {
    pub bound: usize,
    pub within: bool,
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct NaimarkReport {
    pub complement: FrameSystem,
    pub scale: Elem,
    pub c: Elem,
    pub complement_dim: usize,
    pub orthogonal: bool,
    pub image_matches_kernel: bool,
    pub complement_c: Elem,
    /// (a, b, c) of the complement when the input is an ETF.
    pub etf_params: Option<(Elem, Elem, Elem)>,
    /// Case O only.
    pub discriminant_law: Option<bool>,
}

impl FrameSystem {
    pub fn new(space: HermitianSpace, synthesis: Matrix) -> Result<FrameSystem> {
        if synthesis.rows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "synthesis has {} rows in a {}-dimensional space",
                synthesis.rows(),
                space.dim()
            )));
        }
        if synthesis.field() != space.field() {
            return Err(Error::FieldMismatch);
        }
        let coeff = HermitianSpace::standard(space.field(), synthesis.cols());
        let analysis = adjoint_of(&synthesis, &coeff, &space)?;
        let gram = analysis.mul(&synthesis)?;
        let frame_op = synthesis.mul(&analysis)?;
        Ok(FrameSystem { space, synthesis, analysis, gram, frame_op })
    }

    /// Vectors in the real (or complex) model, i.e. the identity form.
    pub fn standard(synthesis: Matrix) -> Result<FrameSystem> {
        let space = HermitianSpace::standard(synthesis.field(), synthesis.rows());
        FrameSystem::new(space, synthesis)
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn space(&self) -> &HermitianSpace {
        &self.space
    }

    pub fn synthesis(&self) -> &Matrix {
        &self.synthesis
    }

    pub fn analysis(&self) -> &Matrix {
        &self.analysis
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn frame_op(&self) -> &Matrix {
        &self.frame_op
    }

    pub fn n(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn d(&self) -> usize {
        self.space.dim()
    }

    pub fn vector(&self, j: usize) -> Vec<Elem> {
        self.synthesis.col(j)
    }

    /// ⟨φ_j, φ_k⟩.
    pub fn product(&self, j: usize, k: usize) -> Elem {
        self.gram.get(j, k)
    }

    /// Φ T for a diagonal T.
    pub fn switched(&self, t: &[Elem]) -> Result<FrameSystem> {
        let tm = Matrix::diagonal(self.field(), t);
        FrameSystem::new(self.space.clone(), self.synthesis.mul(&tm)?)
    }

    /// Subsystem on the given vector indices.
    pub fn restrict(&self, idx: &[usize]) -> FrameSystem {
        FrameSystem::new(self.space.clone(), self.synthesis.select_columns(idx))
            .expect("same space")
    }

    pub fn status(&self) -> TightnessReport {
        let f = self.field();
        let span_dim = self.synthesis.rank();
        let gram_rank = self.gram.rank();
        let is_frame_for_ambient = span_dim == self.d();
        let is_frame_for_span = gram_rank == span_dim;
        let mut report = TightnessReport {
            tight: false,
            c: None,
            is_frame_for_ambient,
            is_frame_for_span,
            totally_isotropic_tight: false,
            span_dim,
            gram_rank,
            c_ambiguous: false,
        };
        if self.synthesis.is_zero() {
            report.c_ambiguous = true;
            return report;
        }
        if is_frame_for_ambient {
            if let Some(c) = self.frame_op.as_scalar() {
                report.tight = true;
                report.c = Some(c);
                report.totally_isotropic_tight = c.is_zero();
            }
            return report;
        }
        // span-restricted: ΦΦ†Φ = cΦ with c ≠ 0
        let lhs = self.frame_op.mul(&self.synthesis).unwrap();
        let (i, j) = (0..self.d())
            .flat_map(|i| (0..self.n()).map(move |j| (i, j)))
            .find(|&(i, j)| !self.synthesis.get(i, j).is_zero())
            .unwrap();
        let c = f.div(lhs.get(i, j), self.synthesis.get(i, j)).unwrap();
        if !c.is_zero() && lhs == self.synthesis.scale(c) {
            report.tight = true;
            report.c = Some(c);
        }
        report
    }

    /// (a, b) when all norms equal a and all pair products equal b; needs n ≥ 2.
    pub fn equiangular(&self) -> Option<EquiangularParams> {
        if self.n() < 2 {
            return None;
        }
        let f = self.field();
        let a = self.gram.get(0, 0);
        let b = f.mul(self.gram.get(0, 1), self.gram.get(1, 0));
        self.is_equiangular_with(a, b).then_some(EquiangularParams { a, b })
    }

    pub fn is_equiangular_with(&self, a: Elem, b: Elem) -> bool {
        let f = self.field();
        let n = self.n();
        (0..n).all(|j| self.gram.get(j, j) == a)
            && (0..n).all(|j| {
                (j + 1..n).all(|k| f.mul(self.gram.get(j, k), self.gram.get(k, j)) == b)
            })
    }

    pub fn etf_verify(&self) -> Result<EtfReport> {
        let params = self.equiangular().ok_or(Error::NotEquiangular)?;
        let f = self.field();
        let EquiangularParams { a, b } = params;
        let n = self.n();
        let status = self.status();
        let d = status.span_dim;
        let nf = f.from_int(n as i64);
        let df = f.from_int(d as i64);
        let mut failure_reasons = Vec::new();

        // a²(n−d) = d(n−1)b
        let welch_holds = f.mul(f.mul(a, a), f.from_int(n as i64 - d as i64))
            == f.mul(f.mul(df, f.from_int(n as i64 - 1)), b);
        if !welch_holds {
            failure_reasons.push("welch identity a^2(n-d) = d(n-1)b fails".to_string());
        }

        let c_formula = f.div(f.mul(nf, a), df);
        let target_c = c_formula.or(status.c);
        let triple_sum_target = target_c.map(|c| f.mul(c, b));
        let mut triple_sum_failures = Vec::new();
        let triple_sum_holds = match triple_sum_target {
            Some(target) => {
                let g2 = self.gram.mul(&self.gram)?;
                for j in 0..n {
                    for k in 0..n {
                        if j != k && f.mul(self.gram.get(j, k), g2.get(k, j)) != target {
                            triple_sum_failures.push((j, k));
                        }
                    }
                }
                if !triple_sum_failures.is_empty() {
                    failure_reasons.push(format!(
                        "triple-sum criterion fails for {} ordered pairs",
                        triple_sum_failures.len()
                    ));
                }
                triple_sum_failures.is_empty()
            }
            None => {
                failure_reasons.push("triple-sum target undefined: d vanishes and no tight constant".to_string());
                false
            }
        };

        let certification_applicable =
            (f.p() as usize) > d && c_formula.is_some_and(|c| !c.is_zero());
        let certified = certification_applicable.then_some(welch_holds && triple_sum_holds);
        if !status.tight {
            failure_reasons.insert(0, "not tight".to_string());
        }
        Ok(EtfReport {
            params,
            c: status.c,
            n,
            span_dim: d,
            ambient_dim: self.d(),
            tight: status.tight,
            welch_holds,
            triple_sum_target,
            triple_sum_holds,
            triple_sum_failures,
            certification_applicable,
            certified,
            verdict: status.tight,
            failure_reasons,
        })
    }

    /// Gram of the span of the vectors, via a basic principal block.
    pub fn span_discriminant(&self) -> Result<Discriminant> {
        discriminant_of(&self.gram)
    }
}

/// Gerzon's bound n ≤ d + (k/2)(d² − d), k = 1 (Case O) or 2 (Case U).
pub fn gerzon_check(n: usize, d: usize, case: Case, params: EquiangularParams, field: &Field) -> Result<GerzonReport> {
    if field.mul(params.a, params.a) == params.b {
        return Err(Error::HypothesisViolated("a^2 = b".into()));
    }
    let bound = match case {
        Case::O => d * (d + 1) / 2,
        Case::U => d * d,
    };
    Ok(GerzonReport { bound, within: n <= bound, saturated: n == bound })
}

/// Vectors whose Gram matrix is exactly `g`.
///
/// The ambient form is diag(1,...,1,δ): δ = det of the basic block when that is
/// a nonsquare (Case O), else 1. `ambient_dim` pads with orthonormal coordinates.
pub fn gram_realize(g: &Matrix, case: Case, ambient_dim: Option<usize>) -> Result<FrameSystem> {
    let f = g.field().clone();
    if f.case() != case {
        return Err(Error::CaseMismatch(format!("field is case {:?}, target is case {case:?}", f.case())));
    }
    if !g.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = g.cols();
    let (k, gb) = g.basic_submatrix()?;
    let r = k.len();
    let det = gb.determinant()?;
    if det.is_zero() {
        return Err(Error::NoInvertiblePrincipalBlock);
    }
    let (phi, form) = if r == 0 {
        (Matrix::zeros(&f, 0, n), Matrix::zeros(&f, 0, 0))
    } else {
        let dz = HermitianSpace::new(gb.clone())?.diagonalize_form();
        let mut c = dz.basis.inverse()?;
        let mut diag = dz.diag;
        if let Some(delta) = f.canonical_nonsquare() {
            if diag[r - 1] == delta {
                let e = f.plain_sqrt(f.div(det, delta).unwrap()).expect("same square class");
                let e_inv = f.inv(e).unwrap();
                for j in 0..r {
                    let v = f.mul(e_inv, c.get(r - 1, j));
                    c.set(r - 1, j, v);
                }
                diag[r - 1] = det;
            }
        }
        let coeffs = gb.inverse()?.mul(&g.select_rows(&k))?;
        (c.mul(&coeffs)?, Matrix::diagonal(&f, &diag))
    };
    let check = phi.conj_transpose().mul(&form)?.mul(&phi)?;
    if check != *g {
        return Err(Error::InconsistentRank("reconstructed gram differs from input".into()));
    }
    let total = ambient_dim.unwrap_or(r);
    if total < r {
        return Err(Error::DimensionMismatch(format!("ambient dimension {total} below rank {r}")));
    }
    let extra = total - r;
    let form = form.block_diag(&Matrix::identity(&f, extra))?;
    let phi = phi.vstack(&Matrix::zeros(&f, extra, n))?;
    FrameSystem::new(HermitianSpace::new(form)?, phi)
}

/// Complement Ψ with Gram s(cI − Φ†Φ).
pub fn naimark_of(fs: &FrameSystem, scale: Option<Elem>) -> Result<NaimarkReport> {
    let f = fs.field().clone();
    let status = fs.status();
    if !status.tight {
        return Err(Error::NotTight);
    }
    let c = status.c.expect("tight has c");
    if c.is_zero() {
        return Err(Error::ZeroTight);
    }
    let s = scale.unwrap_or(f.one());
    if s.is_zero() {
        return Err(Error::HypothesisViolated("scale must be nonzero".into()));
    }
    let n = fs.n();
    let h = Matrix::scalar(&f, n, c).sub(fs.gram())?.scale(s);
    let psi = gram_realize(&h, f.case(), None)?;
    let fail = |msg: String| Err(Error::ComplementVerificationFailed(msg));

    let complement_dim = psi.d();
    if complement_dim != n - status.span_dim {
        return fail(format!("complement dimension {complement_dim} != n - d = {}", n - status.span_dim));
    }
    let orthogonal = psi.synthesis().mul(fs.analysis())?.is_zero();
    if !orthogonal {
        return fail("Psi Phi^dagger is not zero".into());
    }
    let image_matches_kernel = psi.analysis().same_column_space(&fs.synthesis().kernel())?;
    if !image_matches_kernel {
        return fail("image of Psi^dagger differs from kernel of Phi".into());
    }
    let sc = f.mul(s, c);
    let pstatus = psi.status();
    if n > status.span_dim && (!pstatus.tight || pstatus.c != Some(sc)) {
        return fail("complement is not tight with the expected constant".into());
    }
    let etf_params = match fs.etf_verify() {
        Ok(rep) if rep.verdict => {
            let want_a = f.mul(s, f.sub(c, rep.params.a));
            let want_b = f.mul(f.mul(s, s), rep.params.b);
            if n - status.span_dim >= 2 && !psi.is_equiangular_with(want_a, want_b) {
                return fail("complement is not equiangular with (s(c-a), s^2 b)".into());
            }
            Some((want_a, want_b, sc))
        }
        _ => None,
    };
    let discriminant_law = if f.case() == Case::O && complement_dim > 0 {
        let disc_v = if status.is_frame_for_ambient {
            fs.space().discriminant()
        } else {
            fs.span_discriminant()?
        };
        let factor = f.mul(f.pow(s, (n - status.span_dim) as u64), f.pow(c, n as u64));
        let predicted = f.square_class(factor).mul(disc_v.class);
        let actual = psi.span_discriminant()?.class;
        if predicted != actual {
            return fail("discriminant law fails".into());
        }
        Some(true)
    } else {
        None
    };
    Ok(NaimarkReport {
        complement: psi,
        scale: s,
        c,
        complement_dim,
        orthogonal,
        image_matches_kernel,
        complement_c: sc,
        etf_params,
        discriminant_law,
    })
}
