use std::sync::Arc;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::space::{DgSpace, FieldCoeffs};
use crate::mesh::Point;

/// Continuous piecewise-affine field with vertex values `amplitude * Y_i`,
/// `Y_i ~ U(-1, 1)` drawn in vertex order from ChaCha8 seeded with `seed`.
pub fn random_vertex_field(space: &Arc<DgSpace>, seed: u64, amplitude: f64) -> FieldCoeffs {
    let mesh = space.mesh().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    let values: Vec<f64> = (0..mesh.num_vertices()).map(|_| amplitude * dist.sample(&mut rng)).collect();
    let mut out = FieldCoeffs::zeros(space, 1);
    let nb = space.dofs_per_element();
    for k in 0..mesh.num_elements() {
        let el = mesh.element(k);
        let tab = space.volume_tab(k);
        for q in 0..tab.len() {
            let xi: Point = space.to_reference(k, &tab.points[q]);
            let bary = if mesh.dim() == 1 {
                vec![1.0 - xi[0], xi[0]]
            } else {
                vec![1.0 - xi[0] - xi[1], xi[0], xi[1]]
            };
            let v: f64 = bary.iter().zip(el).map(|(l, &i)| l * values[i]).sum();
            let m = out.modes_mut(k, 0);
            for i in 0..nb {
                m[i] += tab.weights[q] * v * tab.values[q * nb + i];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgspace::facet_traces;
    use crate::mesh::Mesh;

    #[test]
    fn bounded_deterministic_and_continuous() {
        let mesh = Mesh::build(&"rectangle 0 1 0 1 4 4".parse().unwrap()).unwrap();
        let s = DgSpace::new(Arc::new(mesh), 1).unwrap();
        let a = random_vertex_field(&s, 7, 0.01);
        let b = random_vertex_field(&s, 7, 0.01);
        assert_eq!(a.as_slice(), b.as_slice());
        let c = random_vertex_field(&s, 8, 0.01);
        assert_ne!(a.as_slice(), c.as_slice());
        for k in 0..s.num_elements() {
            for xi in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.3, 0.3]] {
                let v = crate::dgspace::eval_field(&a, k, &xi).unwrap().0[0];
                assert!(v.abs() <= 0.01 + 1e-15);
            }
        }
        for &f in s.mesh().interior_facets() {
            assert!(facet_traces(&a, f, 0.4).unwrap().jump.iter().all(|j| j.abs() < 1e-12));
        }
    }
}
