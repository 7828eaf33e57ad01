//! Dense linear algebra kernels, backed by LAPACK/BLAS (system OpenBLAS).
//!
//! Everything in this module uses **column-major** storage (BLAS native) and
//! 64-bit floats. Unsafe FFI is confined to this file; the rest of the crate
//! talks to small safe wrappers:
//!
//! * [`sym_tridiag_eigen`] — full eigendecomposition of a real symmetric
//!   tridiagonal matrix (divide and conquer), the workhorse behind both the
//!   operator-walk and the tight-binding propagators.
//! * [`sym_eigen`] — dense real symmetric eigendecomposition, used by the
//!   exact small-system oracle.
//! * [`expm_dense`] — scaling-and-squaring Padé(13) matrix exponential,
//!   retained as an independent cross-check path for dimensions ≤ 512.
//! * [`sigma_max`] — largest singular value of a complex matrix via Lanczos
//!   iteration on B†B with full reorthogonalization, cross-checked against
//!   [`singular_values`] (dense SVD) in the tests.

extern crate openblas_src as _;

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hard cap for the dense-exponential cross-check path.
pub const EXPM_MAX_DIM: usize = 512;

fn lapack_err(routine: &str, info: i32) -> Error {
    Error::Numerical(format!("LAPACK {routine} failed with info = {info}"))
}

/// Eigendecomposition of a real symmetric tridiagonal matrix.
///
/// `eigenvalues` are ascending; `eigenvectors` is column-major `n × n` with
/// the j-th column the unit eigenvector of `eigenvalues[j]`.
#[derive(Debug, Clone)]
pub struct SymTridiagEigen {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
}

/// Full spectral factorization of the symmetric tridiagonal matrix with the
/// given diagonal and off-diagonal, via LAPACK `dstedc` (divide and conquer).
pub fn sym_tridiag_eigen(diag: &[f64], offdiag: &[f64]) -> Result<SymTridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidSpec("empty tridiagonal matrix".into()));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidSpec(format!(
            "off-diagonal length {} does not match dimension {}",
            offdiag.len(),
            n
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    let mut z = vec![0.0f64; n * n];
    if n == 1 {
        z[0] = 1.0;
        return Ok(SymTridiagEigen { n, eigenvalues: d, eigenvectors: z });
    }
    let ni = n as i32;
    let mut info = 0i32;

    // Workspace query, then the real call.
    let mut work_query = [0.0f64; 1];
    let mut iwork_query = [0i32; 1];
    unsafe {
        lapack::dstedc(
            b'I', ni, &mut d, &mut e, &mut z, ni, &mut work_query, -1, &mut iwork_query, -1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dstedc (workspace query)", info));
    }
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack::dstedc(
            b'I', ni, &mut d, &mut e, &mut z, ni, &mut work, lwork, &mut iwork, liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dstedc", info));
    }
    Ok(SymTridiagEigen { n, eigenvalues: d, eigenvectors: z })
}

/// Dense real symmetric eigendecomposition via LAPACK `dsyev`.
///
/// On success `a` (column-major `n × n`, lower triangle referenced) is
/// overwritten with the orthonormal eigenvectors (columns) and the ascending
/// eigenvalues are returned.
pub fn sym_eigen(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::InvalidSpec(format!(
            "matrix buffer has {} entries, expected {}",
            a.len(),
            n * n
        )));
    }
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    let mut work_query = [0.0f64; 1];
    unsafe {
        lapack::dsyev(b'V', b'L', ni, a, ni, &mut w, &mut work_query, -1, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dsyev (workspace query)", info));
    }
    let lwork = work_query[0] as i32;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    unsafe {
        lapack::dsyev(b'V', b'L', ni, a, ni, &mut w, &mut work, lwork, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dsyev", info));
    }
    Ok(w)
}

/// Eigenvalues of a Hermitian matrix given as separate real and imaginary
/// parts (column-major), via LAPACK `zheev`. Used for small cross-checks.
pub fn hermitian_eigenvalues(re: &[f64], im: &[f64], n: usize) -> Result<Vec<f64>> {
    use lapack::c64;
    if re.len() != n * n || im.len() != n * n {
        return Err(Error::InvalidSpec("Hermitian buffer size mismatch".into()));
    }
    let mut a: Vec<c64> = re.iter().zip(im).map(|(&r, &i)| c64::new(r, i)).collect();
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; (3 * n).max(1)];
    let mut info = 0i32;
    let mut work_query = [c64::new(0.0, 0.0); 1];
    unsafe {
        lapack::zheev(b'N', b'L', ni, &mut a, ni, &mut w, &mut work_query, -1, &mut rwork, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("zheev (workspace query)", info));
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![c64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zheev(b'N', b'L', ni, &mut a, ni, &mut w, &mut work, lwork, &mut rwork, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("zheev", info));
    }
    Ok(w)
}

/// Singular values (descending) of a complex `m × n` matrix given as real and
/// imaginary parts (column-major), via LAPACK `zgesvd`. Dense reference route.
pub fn singular_values(re: &[f64], im: &[f64], m: usize, n: usize) -> Result<Vec<f64>> {
    use lapack::c64;
    if re.len() != m * n || im.len() != m * n {
        return Err(Error::InvalidSpec("SVD buffer size mismatch".into()));
    }
    let mut a: Vec<c64> = re.iter().zip(im).map(|(&r, &i)| c64::new(r, i)).collect();
    let (mi, ni) = (m as i32, n as i32);
    let mn = m.min(n);
    let mut s = vec![0.0f64; mn];
    let mut u = [c64::new(0.0, 0.0); 1];
    let mut vt = [c64::new(0.0, 0.0); 1];
    let mut rwork = vec![0.0f64; (5 * mn).max(1)];
    let mut info = 0i32;
    let mut work_query = [c64::new(0.0, 0.0); 1];
    unsafe {
        lapack::zgesvd(
            b'N', b'N', mi, ni, &mut a, mi, &mut s, &mut u, 1, &mut vt, 1, &mut work_query, -1,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("zgesvd (workspace query)", info));
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![c64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        lapack::zgesvd(
            b'N', b'N', mi, ni, &mut a, mi, &mut s, &mut u, 1, &mut vt, 1, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("zgesvd", info));
    }
    Ok(s)
}

/// `c ← alpha·op(a)·op(b) + beta·c` for column-major square-or-rectangular
/// buffers; `ta`/`tb` select transposition. Thin checked wrapper over `dgemm`.
#[allow(clippy::too_many_arguments)]
pub fn gemm(
    ta: bool,
    tb: bool,
    m: usize,
    n: usize,
    k: usize,
    alpha: f64,
    a: &[f64],
    b: &[f64],
    beta: f64,
    c: &mut [f64],
) {
    // op(a) is m×k, op(b) is k×n, c is m×n. Leading dimensions are those of
    // the stored (untransposed) buffers.
    let (lda, a_len) = if ta { (k, m * k) } else { (m, m * k) };
    let (ldb, b_len) = if tb { (n, k * n) } else { (k, k * n) };
    assert_eq!(a.len(), a_len, "gemm: A buffer size");
    assert_eq!(b.len(), b_len, "gemm: B buffer size");
    assert_eq!(c.len(), m * n, "gemm: C buffer size");
    let t = |flag: bool| if flag { b'T' } else { b'N' };
    unsafe {
        blas::dgemm(
            t(ta), t(tb), m as i32, n as i32, k as i32, alpha, a, lda as i32, b, ldb as i32, beta,
            c, m as i32,
        );
    }
}

/// `y ← alpha·op(a)·x + beta·y` for a column-major `m × n` buffer.
pub fn gemv(trans: bool, m: usize, n: usize, alpha: f64, a: &[f64], x: &[f64], beta: f64, y: &mut [f64]) {
    assert_eq!(a.len(), m * n, "gemv: A buffer size");
    let (xl, yl) = if trans { (m, n) } else { (n, m) };
    assert_eq!(x.len(), xl, "gemv: x length");
    assert_eq!(y.len(), yl, "gemv: y length");
    let t = if trans { b'T' } else { b'N' };
    unsafe {
        blas::dgemv(t, m as i32, n as i32, alpha, a, m as i32, x, 1, beta, y, 1);
    }
}

/// Maximum absolute column sum (the induced 1-norm) of a column-major matrix.
fn norm1(a: &[f64], n: usize) -> f64 {
    let mut best = 0.0f64;
    for col in a.chunks_exact(n) {
        let s: f64 = col.iter().map(|x| x.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Dense matrix exponential by scaling and squaring with a Padé(13,13)
/// approximant (column-major, square). Independent of any spectral
/// factorization, so it serves as a cross-check for the eigendecomposition
/// routes; capped at [`EXPM_MAX_DIM`] because it costs O(n³) per call.
pub fn expm_dense(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 || a.len() != n * n {
        return Err(Error::InvalidSpec("expm_dense: bad buffer".into()));
    }
    if n > EXPM_MAX_DIM {
        return Err(Error::InvalidSpec(format!(
            "expm_dense is a cross-check path capped at dimension {EXPM_MAX_DIM}, got {n}"
        )));
    }
    // Padé(13) coefficients (Higham 2005) and its validity radius in 1-norm.
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;

    let nn = n * n;
    let norm = norm1(a, n);
    let s = if norm > THETA_13 {
        ((norm / THETA_13).log2().ceil() as i32).max(0)
    } else {
        0
    };
    let scale = 0.5f64.powi(s);
    let a1: Vec<f64> = a.iter().map(|x| x * scale).collect();

    let mut a2 = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a1, &a1, 0.0, &mut a2);
    let mut a4 = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a2, &a2, 0.0, &mut a4);
    let mut a6 = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a4, &a2, 0.0, &mut a6);

    let add_identity = |m: &mut [f64], c: f64| {
        for i in 0..n {
            m[i * n + i] += c;
        }
    };

    // U = A · (A6·(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let mut inner: Vec<f64> = (0..nn)
        .map(|i| B[13] * a6[i] + B[11] * a4[i] + B[9] * a2[i])
        .collect();
    let mut u_core = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a6, &inner, 0.0, &mut u_core);
    for i in 0..nn {
        u_core[i] += B[7] * a6[i] + B[5] * a4[i] + B[3] * a2[i];
    }
    add_identity(&mut u_core, B[1]);
    let mut u = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a1, &u_core, 0.0, &mut u);

    // V = A6·(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    for i in 0..nn {
        inner[i] = B[12] * a6[i] + B[10] * a4[i] + B[8] * a2[i];
    }
    let mut v = vec![0.0; nn];
    gemm(false, false, n, n, n, 1.0, &a6, &inner, 0.0, &mut v);
    for i in 0..nn {
        v[i] += B[6] * a6[i] + B[4] * a4[i] + B[2] * a2[i];
    }
    add_identity(&mut v, B[0]);

    // Solve (V − U) X = (V + U).
    let mut lhs: Vec<f64> = v.iter().zip(&u).map(|(v, u)| v - u).collect();
    let mut x: Vec<f64> = v.iter().zip(&u).map(|(v, u)| v + u).collect();
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    unsafe {
        lapack::dgesv(n as i32, n as i32, &mut lhs, n as i32, &mut ipiv, &mut x, n as i32, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dgesv", info));
    }

    // Undo the scaling by repeated squaring.
    let mut result = x;
    let mut tmp = vec![0.0; nn];
    for _ in 0..s {
        gemm(false, false, n, n, n, 1.0, &result, &result, 0.0, &mut tmp);
        std::mem::swap(&mut result, &mut tmp);
    }
    Ok(result)
}

/// Largest singular value of a complex `m × n` matrix stored as separate real
/// and imaginary parts (column-major).
///
/// Small matrices go through the dense SVD; larger ones use a seeded Lanczos
/// iteration on B†B with full reorthogonalization, random-restart on
/// breakdown, and Ritz-value stagnation as the stopping rule. The iteration
/// is deterministic for a fixed `seed`.
pub fn sigma_max(re: &[f64], im: &[f64], m: usize, n: usize, seed: u64) -> Result<f64> {
    if re.len() != m * n || im.len() != m * n {
        return Err(Error::InvalidSpec("sigma_max: buffer size mismatch".into()));
    }
    if m == 0 || n == 0 {
        return Ok(0.0);
    }
    if m.min(n) <= 32 {
        let s = singular_values(re, im, m, n)?;
        return Ok(s[0]);
    }

    let frob: f64 = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| r * r + i * i)
        .sum::<f64>()
        .sqrt();
    if frob == 0.0 {
        return Ok(0.0);
    }

    // Complex mat-vecs via four real gemv calls each:
    //   (B v)     = (Bre·vre − Bim·vim) + i (Bre·vim + Bim·vre)
    //   (B† w)    = (Breᵀ·wre + Bimᵀ·wim) + i (Breᵀ·wim − Bimᵀ·wre)
    let apply_bdag_b = |v_re: &[f64], v_im: &[f64], out_re: &mut [f64], out_im: &mut [f64],
                        w_re: &mut [f64], w_im: &mut [f64]| {
        gemv(false, m, n, 1.0, re, v_re, 0.0, w_re);
        gemv(false, m, n, -1.0, im, v_im, 1.0, w_re);
        gemv(false, m, n, 1.0, re, v_im, 0.0, w_im);
        gemv(false, m, n, 1.0, im, v_re, 1.0, w_im);
        gemv(true, m, n, 1.0, re, w_re, 0.0, out_re);
        gemv(true, m, n, 1.0, im, w_im, 1.0, out_re);
        gemv(true, m, n, 1.0, re, w_im, 0.0, out_im);
        gemv(true, m, n, -1.0, im, w_re, 1.0, out_im);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_steps = n.min(300);
    let mut basis_re: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut basis_im: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alpha: Vec<f64> = Vec::with_capacity(max_steps);
    let mut beta: Vec<f64> = Vec::with_capacity(max_steps);

    let norm2 = |xr: &[f64], xi: &[f64]| -> f64 {
        xr.iter()
            .zip(xi)
            .map(|(&r, &i)| r * r + i * i)
            .sum::<f64>()
            .sqrt()
    };

    // Orthogonalize (xr, xi) against the stored basis, twice for stability.
    let orthogonalize = |xr: &mut [f64], xi: &mut [f64], basis_re: &[Vec<f64>], basis_im: &[Vec<f64>]| {
        for _ in 0..2 {
            for (br, bi) in basis_re.iter().zip(basis_im) {
                let mut dot_re = 0.0;
                let mut dot_im = 0.0;
                for j in 0..n {
                    // ⟨b, x⟩ with conjugation on b.
                    dot_re += br[j] * xr[j] + bi[j] * xi[j];
                    dot_im += br[j] * xi[j] - bi[j] * xr[j];
                }
                for j in 0..n {
                    xr[j] -= dot_re * br[j] - dot_im * bi[j];
                    xi[j] -= dot_re * bi[j] + dot_im * br[j];
                }
            }
        }
    };

    let random_unit = |rng: &mut ChaCha8Rng, basis_re: &[Vec<f64>], basis_im: &[Vec<f64>]| -> Option<(Vec<f64>, Vec<f64>)> {
        for _ in 0..8 {
            let mut xr: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            orthogonalize(&mut xr, &mut xi, basis_re, basis_im);
            let nrm = norm2(&xr, &xi);
            if nrm > 1e-8 {
                for v in xr.iter_mut().chain(xi.iter_mut()) {
                    *v /= nrm;
                }
                return Some((xr, xi));
            }
        }
        None
    };

    let (mut v_re, mut v_im) = random_unit(&mut rng, &basis_re, &basis_im)
        .ok_or_else(|| Error::Numerical("sigma_max: could not draw a start vector".into()))?;
    let mut w_re = vec![0.0; m];
    let mut w_im = vec![0.0; m];
    let mut t_re = vec![0.0; n];
    let mut t_im = vec![0.0; n];
    let mut lambda_prev = -1.0f64;
    let mut stagnant = 0u32;
    let mut lambda_best = 0.0f64;

    for step in 0..max_steps {
        basis_re.push(v_re.clone());
        basis_im.push(v_im.clone());
        apply_bdag_b(&v_re, &v_im, &mut t_re, &mut t_im, &mut w_re, &mut w_im);
        // α = ⟨v, B†B v⟩ is real for Hermitian B†B.
        let a_j: f64 = v_re
            .iter()
            .zip(&v_im)
            .zip(t_re.iter().zip(&t_im))
            .map(|((&vr, &vi), (&tr, &ti))| vr * tr + vi * ti)
            .sum();
        alpha.push(a_j);
        orthogonalize(&mut t_re, &mut t_im, &basis_re, &basis_im);
        let b_j = norm2(&t_re, &t_im);

        // Largest Ritz value of the current Lanczos tridiagonal.
        let mut d = alpha.clone();
        let mut e = beta.clone();
        let mut info = 0i32;
        unsafe {
            lapack::dsterf(d.len() as i32, &mut d, &mut e, &mut info);
        }
        if info != 0 {
            return Err(lapack_err("dsterf", info));
        }
        let lambda = d.last().copied().unwrap_or(0.0).max(0.0);
        lambda_best = lambda_best.max(lambda);

        if step >= 7 {
            let tol = 5e-15 * lambda_best.max(frob * frob * 1e-30);
            if (lambda - lambda_prev).abs() <= tol {
                stagnant += 1;
                if stagnant >= 2 {
                    break;
                }
            } else {
                stagnant = 0;
            }
        }
        lambda_prev = lambda;

        if b_j <= 1e-14 * frob * frob {
            // Invariant subspace exhausted; restart in its orthogonal complement.
            match random_unit(&mut rng, &basis_re, &basis_im) {
                Some((xr, xi)) => {
                    beta.push(0.0);
                    v_re = xr;
                    v_im = xi;
                }
                None => break,
            }
        } else {
            beta.push(b_j);
            for j in 0..n {
                t_re[j] /= b_j;
                t_im[j] /= b_j;
            }
            std::mem::swap(&mut v_re, &mut t_re);
            std::mem::swap(&mut v_im, &mut t_im);
        }
    }

    Ok(lambda_best.max(0.0).sqrt())
}
