use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Deg,
    Arcmin,
    Rad,
}

/// An angle as written on the command line. The unit suffix is mandatory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub text: String,
    pub value: f64,
    pub unit: AngleUnit,
    pub radians: f64,
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let (num, unit) = if let Some(n) = t.strip_suffix("arcmin") {
            (n, AngleUnit::Arcmin)
        } else if let Some(n) = t.strip_suffix("deg") {
            (n, AngleUnit::Deg)
        } else if let Some(n) = t.strip_suffix("rad") {
            (n, AngleUnit::Rad)
        } else {
            return Err(format!(
                "angle {s:?} needs a unit suffix: deg, arcmin or rad"
            ));
        };
        let value: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("angle {s:?}: {num:?} is not a number"))?;
        if !value.is_finite() {
            return Err(format!("angle {s:?} is not finite"));
        }
        let radians = match unit {
            AngleUnit::Deg => value.to_radians(),
            AngleUnit::Arcmin => (value / 60.0).to_radians(),
            AngleUnit::Rad => value,
        };
        Ok(Angle {
            text: t.to_string(),
            value,
            unit,
            radians,
        })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn units() {
        assert_eq!("1deg".parse::<Angle>().unwrap().radians, PI / 180.0);
        assert!(("1arcmin".parse::<Angle>().unwrap().radians - PI / 10_800.0).abs() < 1e-18);
        assert_eq!("0rad".parse::<Angle>().unwrap().radians, 0.0);
        assert_eq!("0.5 rad".parse::<Angle>().unwrap().value, 0.5);
    }

    #[test]
    fn suffix_required() {
        assert!("1".parse::<Angle>().is_err());
        assert!("1degree".parse::<Angle>().is_err());
        assert!("deg".parse::<Angle>().is_err());
        assert!("infdeg".parse::<Angle>().is_err());
    }
}
