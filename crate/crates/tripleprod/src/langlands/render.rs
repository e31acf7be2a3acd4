use super::{ArchFactor, Factor};
use num_complex::Complex64 as C64;

fn real(x: f64) -> String {
    let twice = (2.0 * x).round();
    if (2.0 * x - twice).abs() < 1e-9 {
        let n = twice as i64;
        if n % 2 == 0 {
            format!("{}", n / 2)
        } else {
            format!("{n}/2")
        }
    } else {
        format!("{x:.6}")
    }
}

/// Compact rendering of an exponent: `0`, `-1/2`, `3i`, `1/2+2.5i`.
pub fn render_complex(z: C64) -> String {
    let im_zero = z.im.abs() < 1e-9;
    let re_zero = z.re.abs() < 1e-9;
    match (re_zero, im_zero) {
        (_, true) => real(z.re),
        (true, false) => format!("{}i", real(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", real(z.re), sign, real(z.im.abs()))
        }
    }
}

pub(super) fn factor(f: &Factor) -> String {
    match *f {
        Factor::Arch(ArchFactor::Dim1 { s, delta }) => format!("({},{delta})^1_R", render_complex(s)),
        Factor::Arch(ArchFactor::Dim2 { s, l }) => format!("({},{l})^2_R", render_complex(s)),
        Factor::NonArch(g) => {
            let base = format!("||.||^{{{}}}", render_complex(g.s));
            let mut out = if g.n == 1 { base } else { format!("{base}⊗sp^{}", g.n) };
            if g.ramified {
                out.push_str("⊗χ");
            }
            out
        }
    }
}
