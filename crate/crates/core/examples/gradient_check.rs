//! Compare backpropagated gradients with central differences on a small
//! convolutional network.
//!
//! ```text
//! cargo run -p dfr --example gradient_check --release
//! ```

use dfr::nn::{backward, finite_diff_grad, LayerSpec, Network, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> dfr::Result<()> {
    let specs = [
        LayerSpec::conv(1, 4, 3, 1, 1),
        LayerSpec::Relu,
        LayerSpec::MaxPool { size: 2, stride: 2 },
        LayerSpec::conv(4, 6, 3, 1, 1),
        LayerSpec::Relu,
        LayerSpec::MaxPool { size: 2, stride: 2 },
        LayerSpec::Flatten,
        LayerSpec::dense(6 * 4 * 4, 10),
    ];
    let net = Network::<f64>::new(&[1, 16, 16], &specs, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let input = Tensor::from_fn(&[1, 16, 16], |_| rng.gen_range(0.0..1.0));
    let target: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..1.0)).collect();

    let analytic = backward(&net, &input, &target)?;
    let numeric = finite_diff_grad(&net, &input, &target, 1e-5)?;
    for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
        let worst = a
            .data()
            .iter()
            .zip(n.data())
            .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-7))
            .fold(0.0, f64::max);
        println!("parameter tensor {i:>2} ({:>4} values): worst relative error {worst:.2e}", a.len());
    }
    println!("(a few large values can come from probes that cross a ReLU or pooling kink)");
    Ok(())
}
