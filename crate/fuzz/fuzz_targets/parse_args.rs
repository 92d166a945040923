#![no_main]

use iro::constraints::Convention;
use iro::group::GroupId;
use iro::sampler::{QuadAngle, Rational, SubgroupSpec};
use libfuzzer_sys::fuzz_target;

// First byte picks the parser, the rest is its argument string.
fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    match tag % 5 {
        0 => {
            if let Ok(g) = GroupId::parse(s) {
                assert_eq!(GroupId::parse(&g.to_string()).unwrap(), g);
            }
        }
        1 => {
            if let Ok(r) = Rational::parse(s) {
                let x = r.to_f64();
                assert!((0.0..=1.0).contains(&x));
            }
        }
        2 => {
            if let Ok(a) = QuadAngle::parse(s) {
                assert!(a.to_f64().is_finite());
            }
        }
        3 => {
            if let Ok(sub) = SubgroupSpec::parse(s) {
                assert_eq!(SubgroupSpec::parse(&sub.to_string()).unwrap(), sub);
            }
        }
        _ => {
            let _ = Convention::parse(s);
        }
    }
});
