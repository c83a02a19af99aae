//! Quaternion-valued vector fields `(f_0, f_1, f_2, f_3)` with exact divergence,
//! used to exercise the four-dimensional divergence theorem.

use rand::Rng;

use crate::quat::Quaternion;

pub trait QuaternionField: Sync {
    /// `[f_0, f_1, f_2, f_3]` at `p`.
    fn components(&self, p: Quaternion) -> [Quaternion; 4];

    /// `df_0/dt + df_1/dx + df_2/dy + df_3/dz`.
    fn divergence(&self, p: Quaternion) -> Quaternion;

    /// Flux density `f_0 n_0 + f_1 n_1 + f_2 n_2 + f_3 n_3` through a unit normal.
    fn flux(&self, p: Quaternion, normal: Quaternion) -> Quaternion {
        let f = self.components(p);
        let n = normal.to_array();
        f.iter()
            .zip(n)
            .fold(Quaternion::ZERO, |acc, (fi, ni)| acc + *fi * ni)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    exps: [u32; 4],
    coeff: Quaternion,
}

/// `powers[axis][e] = x_axis^e` for `e <= degree`.
fn power_table(p: Quaternion, degree: u32) -> [Vec<f64>; 4] {
    let x = p.to_array();
    std::array::from_fn(|axis| {
        let mut row = Vec::with_capacity(degree as usize + 1);
        let mut acc = 1.0;
        for _ in 0..=degree {
            row.push(acc);
            acc *= x[axis];
        }
        row
    })
}

fn monomial(powers: &[Vec<f64>; 4], exps: [u32; 4]) -> f64 {
    powers[0][exps[0] as usize]
        * powers[1][exps[1] as usize]
        * powers[2][exps[2] as usize]
        * powers[3][exps[3] as usize]
}

/// Four quaternion-valued polynomials in `(t, x, y, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialField {
    components: [Vec<Term>; 4],
    degree: u32,
}

impl PolynomialField {
    /// Dense random polynomials of total degree `<= degree`, coefficients
    /// uniform in `[-1, 1]` per quaternion component.
    pub fn random<R: Rng>(degree: u32, rng: &mut R) -> Self {
        let mut exps = Vec::new();
        for a in 0..=degree {
            for b in 0..=degree - a {
                for c in 0..=degree - a - b {
                    for d in 0..=degree - a - b - c {
                        exps.push([a, b, c, d]);
                    }
                }
            }
        }
        let components = std::array::from_fn(|_| {
            exps.iter()
                .map(|e| Term {
                    exps: *e,
                    coeff: Quaternion::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ),
                })
                .collect()
        });
        Self { components, degree }
    }

    /// `f_m = x_m` (as real quaternions); divergence 4.
    pub fn identity() -> Self {
        Self {
            components: std::array::from_fn(|m| {
                let mut exps = [0; 4];
                exps[m] = 1;
                vec![Term {
                    exps,
                    coeff: Quaternion::ONE,
                }]
            }),
            degree: 1,
        }
    }

    /// Every component equal to the constant `c`.
    pub fn constant(c: Quaternion) -> Self {
        Self {
            components: std::array::from_fn(|_| {
                vec![Term {
                    exps: [0; 4],
                    coeff: c,
                }]
            }),
            degree: 0,
        }
    }
}

impl QuaternionField for PolynomialField {
    fn components(&self, p: Quaternion) -> [Quaternion; 4] {
        let x = power_table(p, self.degree);
        std::array::from_fn(|m| {
            self.components[m].iter().fold(Quaternion::ZERO, |acc, t| {
                acc + t.coeff * monomial(&x, t.exps)
            })
        })
    }

    fn divergence(&self, p: Quaternion) -> Quaternion {
        let x = power_table(p, self.degree);
        let mut out = Quaternion::ZERO;
        for (m, terms) in self.components.iter().enumerate() {
            for t in terms.iter().filter(|t| t.exps[m] > 0) {
                let mut e = t.exps;
                e[m] -= 1;
                out += t.coeff * (t.exps[m] as f64 * monomial(&x, e));
            }
        }
        out
    }
}

/// Field given by closures for the components and their divergence.
pub struct FnField<C, D> {
    pub components: C,
    pub divergence: D,
}

impl<C, D> QuaternionField for FnField<C, D>
where
    C: Fn(Quaternion) -> [Quaternion; 4] + Sync,
    D: Fn(Quaternion) -> Quaternion + Sync,
{
    fn components(&self, p: Quaternion) -> [Quaternion; 4] {
        (self.components)(p)
    }

    fn divergence(&self, p: Quaternion) -> Quaternion {
        (self.divergence)(p)
    }
}
