//! Vectors and covectors in a fixed chart basis.
//!
//! The engine keeps tangent and cotangent data in distinct types: a
//! [`Vector`] lives in V and is measured by asymmetric norms, a [`Covector`]
//! lives in V* and acts on vectors through [`Covector::pairing`]. Mixing the
//! two is the classic bug in Hamiltonian code, so the type system forbids it.

use std::fmt;

/// A point of V: coordinates of a tangent vector (or a chart point).
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

/// A point of V*: coordinates in the dual basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector(Vec<f64>);

macro_rules! coordinate_impl {
    ($name:ident) => {
        impl $name {
            /// Wraps coordinates. Panics on non-finite entries, which are
            /// construction bugs rather than runtime conditions.
            pub fn new(components: Vec<f64>) -> Self {
                assert!(
                    components.iter().all(|c| c.is_finite()),
                    concat!(stringify!($name), " components must be finite: {:?}"),
                    components
                );
                Self(components)
            }

            pub fn zeros(dim: usize) -> Self {
                Self(vec![0.0; dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0.0)
            }

            /// Euclidean length of the coordinate tuple.
            pub fn euclidean_norm(&self) -> f64 {
                self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
            }

            pub fn scaled(&self, s: f64) -> Self {
                Self::new(self.0.iter().map(|c| c * s).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.dim(), other.dim(), "dimension mismatch");
                Self::new(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| a + b)
                        .collect(),
                )
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!(self.dim(), other.dim(), "dimension mismatch");
                Self::new(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| a - b)
                        .collect(),
                )
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self::new(v)
            }
        }

        impl From<[f64; 2]> for $name {
            fn from(v: [f64; 2]) -> Self {
                Self::new(v.to_vec())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    };
}

coordinate_impl!(Vector);
coordinate_impl!(Covector);

impl Covector {
    /// Natural pairing α(y).
    pub fn pairing(&self, y: &Vector) -> f64 {
        assert_eq!(self.dim(), y.dim(), "dimension mismatch");
        self.0.iter().zip(y.as_slice()).map(|(a, b)| a * b).sum()
    }
}

/// Shorthand for a 2-dimensional vector.
pub fn v2(a: f64, b: f64) -> Vector {
    Vector::new(vec![a, b])
}

/// Shorthand for a 2-dimensional covector.
pub fn c2(a: f64, b: f64) -> Covector {
    Covector::new(vec![a, b])
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn euclidean(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_bilinear_sum() {
        let a = c2(2.0, -1.0);
        let y = v2(3.0, 4.0);
        assert_eq!(a.pairing(&y), 2.0);
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn rejects_nan() {
        let _ = Vector::new(vec![f64::NAN, 0.0]);
    }
}
