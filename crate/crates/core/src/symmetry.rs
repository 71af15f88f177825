//! Symmetries of the distance: hyperbolic rotations `X0 = y d/dx + x d/dy`,
//! the reflections `(x, y, z) -> (x, -y, z)` and `(x, y, z) -> (x, y, -z)`,
//! and the dilations `Y = x d/dx + y d/dy + 2z d/dz`.

use crate::exponential::ExpCoords;
use crate::group::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryElement {
    /// Flow of `X0` for time `s`.
    Rotation(f64),
    /// `y -> -y`.
    Reflection1,
    /// `z -> -z`.
    Reflection2,
    /// Flow of `Y` for time `s`; scales the distance by `e^s`.
    Dilation(f64),
}

impl SymmetryElement {
    pub fn apply(self, q: Point) -> Point {
        apply(self, q)
    }
}

/// Image of `q` under a single generator.
pub fn apply(g: SymmetryElement, q: Point) -> Point {
    match g {
        SymmetryElement::Rotation(s) => {
            let (sh, ch) = (s.sinh(), s.cosh());
            Point::new(q.x * ch + q.y * sh, q.x * sh + q.y * ch, q.z)
        }
        SymmetryElement::Reflection1 => Point::new(q.x, -q.y, q.z),
        SymmetryElement::Reflection2 => Point::new(q.x, q.y, -q.z),
        SymmetryElement::Dilation(s) => {
            let e = s.exp();
            Point::new(q.x * e, q.y * e, q.z * e * e)
        }
    }
}

/// Action on extremal coordinates, so that
/// `apply(g, exp_map(lc)) == exp_map(apply_exp_coords(g, lc))`.
///
/// Writing the endpoint as `x + y = (2/c) sinh(ct/2) e^{psi + ct/2}` shows
/// that `y -> -y` flips `psi + ct/2` and `z -> -z` flips `c` while keeping
/// `psi + ct/2`.
pub fn apply_exp_coords(g: SymmetryElement, lc: ExpCoords) -> ExpCoords {
    let ExpCoords { psi, c, t } = lc;
    match g {
        SymmetryElement::Rotation(s) => ExpCoords { psi: psi + s, c, t },
        SymmetryElement::Reflection1 => ExpCoords { psi: -psi - c * t, c, t },
        SymmetryElement::Reflection2 => ExpCoords { psi: psi + c * t, c: -c, t },
        SymmetryElement::Dilation(s) => ExpCoords { psi, c: c * (-s).exp(), t: t * s.exp() },
    }
}

/// Element of the group generated by the four families, kept in the normal
/// form `Dilation(dilation) ∘ Rotation(rotation) ∘ Reflection1^flip_y ∘ Reflection2^flip_z`.
///
/// Rotations and dilations commute, `Reflection2` is central, and
/// `Reflection1 ∘ Rotation(s) = Rotation(-s) ∘ Reflection1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Symmetry {
    pub dilation: f64,
    pub rotation: f64,
    pub flip_y: bool,
    pub flip_z: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { dilation: 0.0, rotation: 0.0, flip_y: false, flip_z: false };

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Symmetry) -> Symmetry {
        let turn = if self.flip_y { -other.rotation } else { other.rotation };
        Symmetry {
            dilation: self.dilation + other.dilation,
            rotation: self.rotation + turn,
            flip_y: self.flip_y ^ other.flip_y,
            flip_z: self.flip_z ^ other.flip_z,
        }
    }

    pub fn inverse(self) -> Symmetry {
        Symmetry {
            dilation: -self.dilation,
            rotation: if self.flip_y { self.rotation } else { -self.rotation },
            flip_y: self.flip_y,
            flip_z: self.flip_z,
        }
    }

    fn factors(self) -> [Option<SymmetryElement>; 4] {
        [
            self.flip_z.then_some(SymmetryElement::Reflection2),
            self.flip_y.then_some(SymmetryElement::Reflection1),
            Some(SymmetryElement::Rotation(self.rotation)),
            Some(SymmetryElement::Dilation(self.dilation)),
        ]
    }

    pub fn apply(self, q: Point) -> Point {
        self.factors().into_iter().flatten().fold(q, |p, g| apply(g, p))
    }

    pub fn apply_exp_coords(self, lc: ExpCoords) -> ExpCoords {
        self.factors().into_iter().flatten().fold(lc, |l, g| apply_exp_coords(g, l))
    }
}

impl From<SymmetryElement> for Symmetry {
    fn from(g: SymmetryElement) -> Self {
        match g {
            SymmetryElement::Rotation(s) => Symmetry { rotation: s, ..Symmetry::IDENTITY },
            SymmetryElement::Dilation(s) => Symmetry { dilation: s, ..Symmetry::IDENTITY },
            SymmetryElement::Reflection1 => Symmetry { flip_y: true, ..Symmetry::IDENTITY },
            SymmetryElement::Reflection2 => Symmetry { flip_z: true, ..Symmetry::IDENTITY },
        }
    }
}
