use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Instance, Point};

pub const SCENARIO_FORMAT_VERSION: u32 = 1;

/// On-disk scenario: `{"format_version":1,"start":[x,y],"collectibles":[[x,y],...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: u32,
    pub start: [f64; 2],
    pub collectibles: Vec<[f64; 2]>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid scenario field `{field}`: {message}")]
    Semantic { field: String, message: String },
}

impl From<serde_json::Error> for ScenarioError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => {
                let message = e.to_string();
                let field =
                    message.split('`').nth(1).filter(|_| message.contains("field")).unwrap_or("<root>").to_string();
                ScenarioError::Semantic { field, message }
            }
            _ => ScenarioError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
        }
    }
}

pub fn parse_scenario(text: &[u8]) -> Result<Instance, ScenarioError> {
    let file: ScenarioFile = serde_json::from_slice(text)?;
    if file.format_version != SCENARIO_FORMAT_VERSION {
        return Err(ScenarioError::Semantic {
            field: "format_version".into(),
            message: format!("unsupported version {}, expected {SCENARIO_FORMAT_VERSION}", file.format_version),
        });
    }
    let point = |field: String, [x, y]: [f64; 2]| {
        Point::try_new(x, y).map_err(|e| ScenarioError::Semantic { field, message: e.to_string() })
    };
    let start = point("start".into(), file.start)?;
    let collectibles = file
        .collectibles
        .iter()
        .enumerate()
        .map(|(i, &xy)| point(format!("collectibles[{i}]"), xy))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance::new(start, collectibles))
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_scenario(instance: &Instance) -> String {
    let file = ScenarioFile {
        format_version: SCENARIO_FORMAT_VERSION,
        start: [instance.start().x, instance.start().y],
        collectibles: instance.collectibles().iter().map(|p| [p.x, p.y]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("scenario serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let one = parse_scenario(br#"{"format_version":1,"start":[0,0],"collectibles":[[3,4]]}"#).unwrap();
        assert_eq!(one.start(), Point::new(0.0, 0.0));
        assert_eq!(one.collectibles(), &[Point::new(3.0, 4.0)]);

        let empty = parse_scenario(br#"{"format_version":1,"start":[0,0],"collectibles":[]}"#).unwrap();
        assert!(empty.is_empty());

        let dec = parse_scenario(br#"{"format_version":1,"start":[0.5,-2.25],"collectibles":[[1e2,3]]}"#).unwrap();
        assert_eq!(dec.start(), Point::new(0.5, -2.25));
        assert_eq!(dec.collectibles(), &[Point::new(100.0, 3.0)]);
    }

    #[test]
    fn missing_fields_are_semantic_errors() {
        match parse_scenario(br#"{"start":[0,0]}"#) {
            Err(ScenarioError::Semantic { field, .. }) => assert!(field == "collectibles" || field == "format_version"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_scenario(br#"{"format_version":1,"start":[0,0]}"#) {
            Err(ScenarioError::Semantic { field, .. }) => assert_eq!(field, "collectibles"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_scenario(br#"{"format_version":1,"collectibles":[]}"#) {
            Err(ScenarioError::Semantic { field, .. }) => assert_eq!(field, "start"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_scenario(b"{\"format_version\":1,\n\"start\":[0,0]\n\"collectibles\":[]}") {
            Err(ScenarioError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_and_unknown_versions() {
        // 1e999 overflows f64; serde_json reports it rather than yielding inf.
        assert!(parse_scenario(br#"{"format_version":1,"start":[1e999,0],"collectibles":[]}"#).is_err());
        assert!(matches!(
            parse_scenario(br#"{"format_version":2,"start":[0,0],"collectibles":[]}"#),
            Err(ScenarioError::Semantic { field, .. }) if field == "format_version"
        ));
    }

    proptest! {
        #[test]
        fn round_trip(start in (-1e6..1e6f64, -1e6..1e6f64), pts in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64), 0..20)) {
            let inst = Instance::from_coords(start, &pts).unwrap();
            prop_assert_eq!(parse_scenario(serialize_scenario(&inst).as_bytes()).unwrap(), inst);
        }
    }
}
