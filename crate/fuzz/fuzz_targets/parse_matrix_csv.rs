#![no_main]

use cutcover::io::{parse_matrix_csv, write_matrix_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(net) = parse_matrix_csv(data) else {
        return;
    };
    if net.labels().iter().any(|l| l.parse::<f64>().is_ok()) {
        return;
    }
    let mut out = Vec::new();
    write_matrix_csv(&mut out, net.labels(), net.dissim()).unwrap();
    assert_eq!(parse_matrix_csv(&out).unwrap(), net);
});
