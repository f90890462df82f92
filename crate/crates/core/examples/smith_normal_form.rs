//! Smith normal form, integer kernels and a presented module.

use johnson_levine::exactla::{integer_kernel, smith_normal_form, IntMatrix, PresentedModule};

fn main() {
    let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let d = smith_normal_form(&a);
    println!("invariant factors: {:?}", d.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>());
    assert_eq!(d.u.mul(&a).unwrap().mul(&d.v).unwrap(), d.s);

    let b = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
    let k = integer_kernel(&b);
    println!("kernel of [[1,2,3],[2,4,6]] has {} basis columns: {}", k.cols(), serde_json::to_string(&k).unwrap());

    // Z^2 / <(2, 0), (0, 4)>
    let m = PresentedModule::from_matrix(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    println!("free rank {}, torsion {:?}", m.free_rank(), m.torsion().iter().map(ToString::to_string).collect::<Vec<_>>());
}
