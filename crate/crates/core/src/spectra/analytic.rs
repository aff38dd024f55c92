use super::series::FourierSeries;
use crate::error::{invalid, Result};
use crate::qcore::{embed, gate_matrix, ComplexMatrix, EncodingGenerator, GateSpec, C64};
use crate::switch::Permutation;

/// Which gate orders enter the bra and the ket of `<ψ'| g(x)† O g(x) |ψ>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderMode {
    /// `π' = π`: the output of a single fixed order.
    Fixed(Permutation),
    /// Interference between two orders, `W^{π'}` in the bra and `W^π` in the ket.
    Cross { bra: Permutation, ket: Permutation },
}

/// Fourier coefficients of `x ↦ <0| W^{π'}† g(x)† O g(x) W^π |0>` with the
/// encoding `g(x) = exp(-ixH)` applied after the variational block.
///
/// Works in the eigenbasis `Q` of `H`: with `a = Q† W^π |0>`,
/// `a' = Q† W^{π'} |0>` and `Õ = Q† O Q`, the term at `λ_k − λ_l` collects
/// `conj(a'_k) Õ_kl a_l`.
pub fn analytic_coefficients(
    gates: &[GateSpec],
    gen: &EncodingGenerator,
    obs: &ComplexMatrix,
    mode: &OrderMode,
) -> Result<FourierSeries> {
    let d = gen.dim();
    if !d.is_power_of_two() {
        return invalid(format!("generator dimension {d} is not a power of two"));
    }
    let n_qubits = d.trailing_zeros() as usize;
    if obs.rows() != d || obs.cols() != d {
        return invalid(format!(
            "observable is {}x{}, generator acts on dimension {d}",
            obs.rows(),
            obs.cols()
        ));
    }
    if !obs.is_hermitian(1e-10) {
        return invalid("observable is not Hermitian");
    }
    let (bra, ket) = match mode {
        OrderMode::Fixed(p) => (p, p),
        OrderMode::Cross { bra, ket } => (bra, ket),
    };
    if bra.len() != gates.len() || ket.len() != gates.len() {
        return invalid(format!("order length does not match {} gates", gates.len()));
    }
    let mats = gates
        .iter()
        .map(|g| {
            g.validate(Some(n_qubits))?;
            embed(&gate_matrix(g)?, &g.targets, n_qubits)
        })
        .collect::<Result<Vec<_>>>()?;

    let q = gen.eigenvectors();
    let q_adj = q.adjoint();
    let first_column = |w: &ComplexMatrix| -> Result<Vec<C64>> {
        let col: Vec<C64> = (0..d).map(|i| w[(i, 0)]).collect();
        q_adj.mul_vec(&col)
    };
    let a = first_column(&ket.ordered_product(&mats)?)?;
    let a_bra = first_column(&bra.ordered_product(&mats)?)?;
    let o = q_adj.matmul(obs)?.matmul(q)?;
    let lambda = gen.eigenvalues();

    let mut terms = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            terms.push((lambda[k] - lambda[l], a_bra[k].conj() * o[(k, l)] * a[l]));
        }
    }
    Ok(FourierSeries::new(terms))
}
