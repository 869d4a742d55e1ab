use spdflow::linalg::{sym_eig, SymMatrix};
use spdflow::measure::DiscreteMeasure;
use spdflow::rng::{random_measure, random_spd, SplitMix64, WeightMode};
use spdflow::spd::{mat_exp, riem_dist, SpdMatrix};
use spdflow::trajectory::beta;
use spdflow::resolvent;

// independent barycenter: coordinate descent on F(Z) = sum w_j d^2(Z, A_j)
// over the 3 entries of S with Z = exp(S)
fn chart_minimizer(mu: &DiscreteMeasure) -> SpdMatrix {
    let f = |s: &[f64; 3]| -> f64 {
        let z = mat_exp(
            &SymMatrix::from_rows(&[vec![s[0], s[1]], vec![s[1], s[2]]]).unwrap(),
        )
        .unwrap();
        mu.atoms()
            .iter()
            .zip(mu.weights())
            .map(|(a, w)| {
                let d = riem_dist(&z, a).unwrap();
                w * d * d
            })
            .sum()
    };
    let lm = mu.log_mean();
    let mut s = [lm.get(0, 0), lm.get(0, 1), lm.get(1, 1)];
    let mut fs = f(&s);
    let mut step = 0.5;
    while step > 1e-8 {
        loop {
            let mut improved = false;
            for idx in 0..3 {
                for dir in [step, -step] {
                    let mut cand = s;
                    cand[idx] += dir;
                    let fc = f(&cand);
                    if fc < fs {
                        s = cand;
                        fs = fc;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    mat_exp(&SymMatrix::from_rows(&[vec![s[0], s[1]], vec![s[1], s[2]]]).unwrap()).unwrap()
}

fn main() {
    let mut rng = SplitMix64::new(116);
    for inst in 0..3 {
        let mu = random_measure(2, 3, 0.7, WeightMode::Uniform, &mut rng).unwrap();
        let x = random_spd(2, 0.7, &mut rng).unwrap();
        for lambda in [1.0] {
            let t: f64 = lambda / (lambda + 1.0);
            let b = beta(&x, &mu, t, &Default::default()).unwrap().beta;
            let j = resolvent(lambda, &mu, &x, &Default::default()).unwrap();
            let diff = j.sym() - b.sym();
            let spec = sym_eig(&diff).unwrap();
            println!(
                "inst {inst} lambda {lambda}: spectrum(J - beta) = {:?}",
                spec.eigenvalues()
            );

            // independent routes
            let flowed = mu.geometric_flow(&x, t).unwrap();
            let b_oracle = chart_minimizer(&flowed);
            let blended = mu
                .mixture(&DiscreteMeasure::dirac(x.clone()), lambda / (lambda + 1.0))
                .unwrap();
            let j_oracle = chart_minimizer(&blended);
            println!(
                "   solver-vs-oracle: d(beta) = {:.3e}, d(J) = {:.3e}",
                riem_dist(&b, &b_oracle).unwrap(),
                riem_dist(&j, &j_oracle).unwrap()
            );
            let diff_o = j_oracle.sym() - b_oracle.sym();
            println!(
                "   oracle spectrum(J - beta) = {:?}",
                sym_eig(&diff_o).unwrap().eigenvalues()
            );
        }
    }
}
