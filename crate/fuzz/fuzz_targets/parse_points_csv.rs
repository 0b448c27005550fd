#![no_main]

use cutcover::io::{parse_points_csv, write_points_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(cloud) = parse_points_csv(data) else {
        return;
    };
    if cloud.labels().iter().any(|l| l.parse::<f64>().is_ok()) {
        return;
    }
    let mut out = Vec::new();
    write_points_csv(&mut out, &cloud).unwrap();
    assert_eq!(parse_points_csv(&out).unwrap(), cloud);
});
