//! The two worked case studies (the Airy-type cubic cover and the
//! two-sheeted elementary cover) as ready-made quivers and local systems,
//! plus small scalar fixtures. These are the golden values the rest of the
//! crate tests against; the covers pipeline re-derives them numerically.

use crate::exact::{GaussRational, MatrixQi};
use crate::quiver::{Frame, LocalSystem, Quiver, QuiverNode};
use crate::Result;

/// Airy-type quiver: Ψ of dimension 3, points ±2, one-dimensional Φ at
/// each, in the standard frame.
pub fn airy_quiver() -> Quiver {
    airy_quiver_unordered().expect("fixture is valid")
}

/// Same data with the nodes listed (+2, -2), exercising the sort.
pub fn airy_quiver_unordered() -> Result<Quiver> {
    let plus = QuiverNode::new(
        GaussRational::from_int(2),
        MatrixQi::from_ints(&[&[0, 1, -1]]),
        MatrixQi::from_ints(&[&[0], &[1], &[-1]]),
    );
    let minus = QuiverNode::new(
        GaussRational::from_int(-2),
        MatrixQi::from_ints(&[&[1, 0, -1]]),
        MatrixQi::from_ints(&[&[1], &[0], &[-1]]),
    );
    Quiver::new(Frame::standard(), 3, vec![plus, minus])
}

/// Monodromy data underlying [`airy_quiver`]: rank 3, T₂ the transposition
/// of sheets 2,3 and T₋₂ the transposition of sheets 1,3.
pub fn airy_local_system() -> LocalSystem {
    LocalSystem::new(
        Frame::standard(),
        3,
        vec![GaussRational::from_int(-2), GaussRational::from_int(2)],
        vec![
            MatrixQi::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
            MatrixQi::from_ints(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
        ],
    )
    .expect("fixture is valid")
}

/// Elementary two-sheeted quiver: Ψ of dimension 2, points ±2, both
/// monodromies the sheet swap.
pub fn elementary_quiver() -> Quiver {
    let node = |c: i64| {
        QuiverNode::new(
            GaussRational::from_int(c),
            MatrixQi::from_ints(&[&[1, -1]]),
            MatrixQi::from_ints(&[&[1], &[-1]]),
        )
    };
    Quiver::new(Frame::standard(), 2, vec![node(-2), node(2)]).expect("fixture is valid")
}

/// Monodromy data underlying [`elementary_quiver`].
pub fn elementary_local_system() -> LocalSystem {
    let swap = MatrixQi::from_ints(&[&[0, 1], &[1, 0]]);
    LocalSystem::new(
        Frame::standard(),
        2,
        vec![GaussRational::from_int(-2), GaussRational::from_int(2)],
        vec![swap.clone(), swap],
    )
    .expect("fixture is valid")
}

/// Single node at 0 with scalar maps u, v (requires 1 - uv ≠ 0).
pub fn scalar_quiver(u: i64, v: i64) -> Quiver {
    let node = QuiverNode::new(
        GaussRational::zero(),
        MatrixQi::from_ints(&[&[u]]),
        MatrixQi::from_ints(&[&[v]]),
    );
    Quiver::new(Frame::standard(), 1, vec![node]).expect("fixture is valid")
}

/// Two scalar nodes at ∓1 with maps (u₁,v₁), (u₂,v₂) on a line Ψ.
pub fn scalar_two_node_quiver() -> Quiver {
    let node = |c: i64, u: i64, v: i64| {
        QuiverNode::new(
            GaussRational::from_int(c),
            MatrixQi::from_ints(&[&[u]]),
            MatrixQi::from_ints(&[&[v]]),
        )
    };
    Quiver::new(Frame::standard(), 1, vec![node(-1, 1, 2), node(1, 1, 3)])
        .expect("fixture is valid")
}
