#![no_main]

use cutcover::io::{format_coverings, parse_coverings};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(file) = parse_coverings(text) {
        let again = format_coverings(&file).unwrap();
        assert_eq!(parse_coverings(&again).unwrap(), file);
    }
});
