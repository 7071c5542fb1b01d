use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gem_core::C;

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// CSV text from a header and rows of already formatted fields.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

pub fn boundary_csv(times: &[f64], input: &[C<f64>], output: &[C<f64>]) -> String {
    csv(
        &["t", "re_in", "im_in", "re_out", "im_out", "abs_out_sq"],
        times.iter().zip(input).zip(output).map(|((&t, i), o)| {
            vec![num(t), num(i.re), num(i.im), num(o.re), num(o.im), num(o.norm_sqr())]
        }),
    )
}

/// Long-format space-time grid: one row per stored `(t, z)` sample.
pub fn zt_csv<'a>(rows: impl Iterator<Item = (f64, &'a [f64], &'a [C<f64>])>) -> String {
    let mut out = Vec::new();
    for (t, z, v) in rows {
        for (zz, val) in z.iter().zip(v) {
            out.push(vec![num(t), num(*zz), num(val.re), num(val.im), num(val.norm_sqr())]);
        }
    }
    csv(&["t", "z", "re", "im", "abs_sq"], out)
}
