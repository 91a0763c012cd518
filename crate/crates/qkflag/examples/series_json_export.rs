//! Serialize a computed series to the interchange JSON format and read it
//! back. Coefficients survive the round trip exactly.

use qkflag::json::{dto_to_series, series_to_dto, SeriesDto};
use qkflag::{i_series, FlagType, LevelSpec};

fn main() {
    let flag = FlagType::new(3, vec![1, 2]).unwrap();
    let level = LevelSpec::from_pairs(2, &[(1, 1)]).unwrap();
    let series = i_series(&flag, 1, &level, true, 1).unwrap();

    let text = serde_json::to_string_pretty(&series_to_dto(&series)).unwrap();
    println!("{text}");

    let parsed: SeriesDto = serde_json::from_str(&text).unwrap();
    let recovered = dto_to_series(&parsed).unwrap();
    assert_eq!(recovered.coeffs, series.coeffs);
    println!("\nround trip preserved all {} coefficients", series.coeffs.len());
}
