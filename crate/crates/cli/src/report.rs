use serde::Serialize;

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<String>,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, value: Option<f64>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, value: value.map(num), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<Param>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), parameters: Vec::new(), checks: Vec::new(), tables: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push(Param { key: key.into(), value: value.to_string() });
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command = {}\n", self.command));
        for p in &self.parameters {
            out.push_str(&format!("{} = {}\n", p.key, p.value));
        }
        out.push_str("\n[checks]\n");
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            match &c.value {
                Some(v) => out.push_str(&format!("{status} {} value={v} {}\n", c.name, c.detail)),
                None => out.push_str(&format!("{status} {} {}\n", c.name, c.detail)),
            }
        }
        for t in &self.tables {
            out.push_str(&format!("\n[table {}]\n", t.name));
            out.push_str(&t.header.join("\t"));
            out.push('\n');
            for row in &t.rows {
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
        }
        out.push_str(&format!("\nresult = {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The first table, or the checks when there is none.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self.tables.first() {
            Some(t) => {
                w.write_record(&t.header).expect("in-memory write");
                for row in &t.rows {
                    w.write_record(row).expect("in-memory write");
                }
            }
            None => {
                w.write_record(["check", "passed", "value", "detail"]).expect("in-memory write");
                for c in &self.checks {
                    w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, c.value.as_deref().unwrap_or(""), &c.detail])
                        .expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
