//! Stokes multipliers of a quiver in a fixed frame, the factorization
//! identities that tie them to the monodromy data, and the Fourier-side
//! constructions (smash to one node, point Fourier-Sato swap, and their
//! composite).

use crate::error::{Error, Result};
use crate::exact::{GaussRational, MatrixQi};
use crate::quiver::{Quiver, QuiverNode};

/// The pair of Stokes multipliers in block form. Row and column blocks are
/// indexed by the β-ordered singular points; block (i, j) has shape
/// d_i × d_j where d_i = dim Φ_{c_i}.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesPair {
    pub order: Vec<GaussRational>,
    pub block_dims: Vec<usize>,
    pub s_plus: MatrixQi,
    pub s_minus: MatrixQi,
}

fn block_offsets(dims: &[usize]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    for d in dims {
        offs.push(acc);
        acc += d;
    }
    offs.push(acc);
    offs
}

fn write_block(target: &mut MatrixQi, offs: &[usize], bi: usize, bj: usize, block: &MatrixQi) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(offs[bi] + i, offs[bj] + j, block.get(i, j).clone());
        }
    }
}

/// Both Stokes multipliers of the quiver.
///
/// S⁺ is block upper triangular with identity diagonal and block
/// (i, j) = u_i·v_j for i < j. S⁻ is block lower triangular with diagonal
/// blocks 𝕋_i = 1 − u_i·v_i and block (i, j) = −u_i·v_j for i > j.
pub fn stokes_matrices(q: &Quiver) -> StokesPair {
    let n = q.nodes().len();
    let dims: Vec<usize> = q.nodes().iter().map(QuiverNode::phi_dim).collect();
    let offs = block_offsets(&dims);
    let total = offs[n];
    let mut s_plus = MatrixQi::identity(total);
    let mut s_minus = MatrixQi::zero(total, total);
    for i in 0..n {
        write_block(&mut s_minus, &offs, i, i, &q.comonodromy(i));
        for j in 0..n {
            if i < j {
                let block = q.node(i).u.matmul(&q.node(j).v);
                write_block(&mut s_plus, &offs, i, j, &block);
            } else if i > j {
                let block = q.node(i).u.matmul(&q.node(j).v).neg();
                write_block(&mut s_minus, &offs, i, j, &block);
            }
        }
    }
    StokesPair {
        order: q.nodes().iter().map(|nd| nd.point.clone()).collect(),
        block_dims: dims,
        s_plus,
        s_minus,
    }
}

/// Closed-form inverse of S⁺: identity diagonal and, for i < j, block
/// (i, j) = −u_i·T_{i+1}·…·T_{j−1}·v_j (the empty product for adjacent
/// blocks). This is the telescoping inverse of the unitriangular S⁺; the
/// generic row-reduction inverse must agree and tests compare the two.
pub fn stokes_plus_inverse(q: &Quiver) -> MatrixQi {
    let n = q.nodes().len();
    let dims: Vec<usize> = q.nodes().iter().map(QuiverNode::phi_dim).collect();
    let offs = block_offsets(&dims);
    let mut inv = MatrixQi::identity(offs[n]);
    for i in 0..n {
        // Running product u_i·T_{i+1}·…·T_{j-1}, extended as j advances.
        let mut lead = q.node(i).u.clone();
        for j in (i + 1)..n {
            let block = lead.matmul(&q.node(j).v).neg();
            write_block(&mut inv, &offs, i, j, &block);
            lead = lead.matmul(&q.monodromy(j));
        }
    }
    inv
}

/// Column stack U_Σ: block i is U_i = u_i·T_{i+1}·…·T_n, the map Ψ → Φ_i
/// seen after transporting past all later points.
pub fn u_sigma(q: &Quiver) -> MatrixQi {
    let n = q.nodes().len();
    let mut blocks: Vec<MatrixQi> = Vec::with_capacity(n);
    for i in 0..n {
        let mut block = q.node(i).u.clone();
        for j in (i + 1)..n {
            block = block.matmul(&q.monodromy(j));
        }
        blocks.push(block);
    }
    let refs: Vec<&MatrixQi> = blocks.iter().collect();
    if refs.is_empty() {
        MatrixQi::zero(0, q.psi_dim())
    } else {
        MatrixQi::vstack(&refs)
    }
}

/// Row concatenation V_Σ = (v_1 | … | v_n): Φ_Σ → Ψ.
pub fn v_sigma(q: &Quiver) -> MatrixQi {
    let blocks: Vec<&MatrixQi> = q.nodes().iter().map(|nd| &nd.v).collect();
    if blocks.is_empty() {
        MatrixQi::zero(q.psi_dim(), 0)
    } else {
        MatrixQi::hstack(&blocks)
    }
}

/// Which of the two factorization identities a mismatch was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentitySide {
    Phi,
    Psi,
}

/// First failing entry of an identity check, with both values.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub side: IdentitySide,
    pub row: usize,
    pub col: usize,
    pub lhs: GaussRational,
    pub rhs: GaussRational,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = match self.side {
            IdentitySide::Phi => "phi",
            IdentitySide::Psi => "psi",
        };
        write!(
            f,
            "{side} identity fails at ({}, {}): {} != {}",
            self.row, self.col, self.lhs, self.rhs
        )
    }
}

/// Outcome of [`verify_theorem_identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub phi_holds: bool,
    pub psi_holds: bool,
    pub first_mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.phi_holds && self.psi_holds
    }
}

fn first_diff(side: IdentitySide, lhs: &MatrixQi, rhs: &MatrixQi) -> Option<Mismatch> {
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs.get(i, j) != rhs.get(i, j) {
                return Some(Mismatch {
                    side,
                    row: i,
                    col: j,
                    lhs: lhs.get(i, j).clone(),
                    rhs: rhs.get(i, j).clone(),
                });
            }
        }
    }
    None
}

/// Check both factorization identities exactly:
///
/// * on Φ_Σ: (S⁺)⁻¹·S⁻ = 1 − U_Σ·V_Σ,
/// * on Ψ:   1 − V_Σ·U_Σ = T_1·…·T_n (the factor at the last point acting
///   first).
///
/// The left side of the Φ identity inverts S⁺ by generic row reduction on
/// purpose, so it cross-checks [`stokes_plus_inverse`] rather than reusing
/// it.
pub fn verify_theorem_identity(q: &Quiver) -> Result<IdentityReport> {
    let pair = stokes_matrices(q);
    let s_plus_inv = pair
        .s_plus
        .inverse()
        .map_err(|_| Error::internal("unitriangular S+ failed to invert"))?;
    let us = u_sigma(q);
    let vs = v_sigma(q);

    let phi_lhs = s_plus_inv.matmul(&pair.s_minus);
    let phi_rhs = MatrixQi::identity(us.rows()).sub(&us.matmul(&vs));
    let psi_lhs = MatrixQi::identity(q.psi_dim()).sub(&vs.matmul(&us));
    let psi_rhs = q.total_monodromy_psi();

    let phi_mismatch = first_diff(IdentitySide::Phi, &phi_lhs, &phi_rhs);
    let psi_mismatch = first_diff(IdentitySide::Psi, &psi_lhs, &psi_rhs);
    Ok(IdentityReport {
        phi_holds: phi_mismatch.is_none(),
        psi_holds: psi_mismatch.is_none(),
        first_mismatch: phi_mismatch.or(psi_mismatch),
    })
}

/// Collapse all nodes to a single node at 0 carrying (Φ_Σ, U_Σ, V_Σ); the
/// frame is unchanged. Always a valid quiver: 1 − V_Σ·U_Σ is the product
/// of the invertible T_c.
pub fn smash_quiver(q: &Quiver) -> Result<Quiver> {
    let node = QuiverNode::new(GaussRational::zero(), u_sigma(q), v_sigma(q));
    Quiver::new(q.frame().clone(), q.psi_dim(), vec![node])
}

/// Fourier-Sato transform of a quiver concentrated at the origin: swap the
/// two spaces and the two maps, (Ψ, Φ, u, v) ↦ (Φ, Ψ, v, u), and rotate
/// the frame (α, β) ↦ (β, −α). Applying it twice restores the data with
/// frame (−α, −β).
pub fn fourier_sato_point(q: &Quiver) -> Result<Quiver> {
    if q.nodes().len() != 1 {
        return Err(Error::NotSinglePointAtZero {
            context: format!("{} nodes", q.nodes().len()),
        });
    }
    let node = q.node(0);
    if !node.point.is_zero() {
        return Err(Error::NotSinglePointAtZero {
            context: format!("node sits at {}", node.point),
        });
    }
    let new_node = QuiverNode::new(GaussRational::zero(), node.v.clone(), node.u.clone());
    Quiver::new(q.frame().fourier_rotate(), node.phi_dim(), vec![new_node])
}

/// Fourier transform of the whole quiver: smash to one node at 0, then the
/// point Fourier-Sato swap. The result has Ψ′ = Φ_Σ, Φ′ = Ψ, u′ = V_Σ,
/// v′ = U_Σ in the rotated frame.
pub fn fourier_quiver(q: &Quiver) -> Result<Quiver> {
    fourier_sato_point(&smash_quiver(q)?)
}

/// The points carrying nonzero vanishing cycles, with their dimensions, in
/// β-order: the exponential support of the Fourier side.
pub fn exponential_components(q: &Quiver) -> Vec<(GaussRational, usize)> {
    q.nodes()
        .iter()
        .filter(|n| n.phi_dim() > 0)
        .map(|n| (n.point.clone(), n.phi_dim()))
        .collect()
}
