//! File formats: JSON scenarios, metadata-prefixed CSV results and SVG plots.

mod results;
mod scenario;
mod svg;

pub use results::{
    parse_results_csv, results_csv_bytes, write_results_csv, Metadata, ResultsError, ResultsTable, TableBody,
};
pub use scenario::{parse_scenario, serialize_scenario, ScenarioError, ScenarioFile, SCENARIO_FORMAT_VERSION};
pub use svg::{render_routes_svg, LabeledRoute, RenderError, RouteStyle, MAX_ROUTES};

/// Renders a real with 9 significant digits, dropping redundant zeros:
/// `5.5`, `5`, `10`, `0.0500000001`.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("exponent formatting parses");
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::format_real;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_real(5.5), "5.5");
        assert_eq!(format_real(5.0), "5");
        assert_eq!(format_real(10.0), "10");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333");
        assert_eq!(format_real(123456789.4), "123456789");
        assert_eq!(format_real(2.0 / 3.0 * 1000.0), "666.666667");
        assert_eq!(format_real(0.1 + 0.2), "0.3");
    }
}
