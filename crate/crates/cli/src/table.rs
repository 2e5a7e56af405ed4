/// A CSV table. Tables indexed by `t` carry `u = log(2/t)` as their second
/// column.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        let mut header = vec!["t".to_string(), "u".to_string()];
        header.extend(columns.iter().map(|c| c.to_string()));
        Table { header, rows: Vec::new() }
    }

    pub fn summary(columns: &[&str]) -> Self {
        Table {
            header: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, values: &[f64]) {
        let mut row = vec![format!("{t:e}"), format!("{:e}", (2.0 / t).ln())];
        row.extend(values.iter().map(|v| format!("{v:e}")));
        self.rows.push(row);
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("CSV of numbers is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexed_rows_lead_with_t_and_u() {
        let mut t = Table::new(&["v"]);
        t.push(2.0, &[f64::INFINITY]);
        assert_eq!(t.to_csv().unwrap(), "t,u,v\n2e0,0e0,inf\n");
    }

    #[test]
    fn summary_rows_are_verbatim() {
        let mut t = Table::summary(&["q", "target"]);
        t.push_raw(vec!["2".into(), "LZ:inf,2,-1".into()]);
        assert_eq!(t.to_csv().unwrap(), "q,target\n2,\"LZ:inf,2,-1\"\n");
    }
}
