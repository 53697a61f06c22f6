//! JSON encoding of matrices:
//! `{"rows": n, "cols": m, "data": [[re, im], ...]}` row-major.
//! This layout is normative for the CLI and all file formats in the crate.

use super::CMatrix;
use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let data: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("data", &data)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(deserializer)?;
        let data: Vec<Complex64> = raw.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        CMatrix::try_new(raw.rows, raw.cols, data).map_err(|e| D::Error::custom(e.to_string()))
    }
}
