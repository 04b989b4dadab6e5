use crate::model::{Activity, ClockTime, Instance, Partition, Schedule};
use serde::Serialize;
use std::fmt::Write as _;

/// One stretch of work from take-off to landing at a base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WorkWindow {
    /// First flying interval, 0-based.
    pub from: usize,
    /// Interval of arrival at the base, or `|T|` if still out at the end.
    pub to: usize,
    pub start: ClockTime,
    pub end: ClockTime,
    pub drops: u32,
}

/// Cell glyph: `P` at the start position, `F` flying, `C#`/`I#` at a water
/// or wildfire node, `B#` on landing at a base and `R` for the rest of the
/// stay there.
pub fn glyph(instance: &Instance, line: &[Activity], t: usize) -> String {
    match line[t] {
        Activity::Fly(_) => "F".into(),
        Activity::Unplaced => "?".into(),
        Activity::At(i) => match instance.partition(i) {
            Partition::Base if t > 0 && line[t - 1] == Activity::At(i) => "R".into(),
            _ => instance.label(i),
        },
    }
}

/// Work windows of every helicopter. A window starts when the helicopter
/// leaves its start position or a base and ends when it lands at a base.
pub fn work_windows(instance: &Instance, schedule: &Schedule) -> Vec<Vec<WorkWindow>> {
    let grid = &instance.grid;
    let horizon = instance.horizon();
    instance
        .helicopter_ids()
        .map(|a| {
            let line = &schedule.timelines[a.0];
            let mut out = Vec::new();
            let mut open: Option<(usize, u32)> = None;
            for t in 0..horizon {
                let grounded = matches!(line[t], Activity::At(i) if !instance.is_service(i));
                match (&mut open, grounded) {
                    (None, false) => open = Some((t, drop_here(instance, line, t))),
                    (Some((_, d)), false) => *d += drop_here(instance, line, t),
                    (Some((from, drops)), true) => {
                        out.push(window(grid, *from, t, *drops));
                        open = None;
                    }
                    (None, true) => {}
                }
            }
            if let Some((from, drops)) = open {
                out.push(window(grid, from, horizon, drops));
            }
            out
        })
        .collect()
}

fn window(grid: &crate::model::TimeGrid, from: usize, to: usize, drops: u32) -> WorkWindow {
    WorkWindow {
        from,
        to,
        start: grid.clock_at(from),
        end: grid.clock_at(to),
        drops,
    }
}

/// 1 on the first interval of a stay at a wildfire node.
fn drop_here(instance: &Instance, line: &[Activity], t: usize) -> u32 {
    match line[t] {
        Activity::At(i) if instance.is_fire(i) && (t == 0 || line[t - 1] != line[t]) => 1,
        _ => 0,
    }
}

/// Text Gantt chart followed by the work-window table.
pub fn render_schedule(instance: &Instance, schedule: &Schedule) -> String {
    let horizon = instance.horizon();
    let cells: Vec<Vec<String>> = instance
        .helicopter_ids()
        .map(|a| (0..horizon).map(|t| glyph(instance, &schedule.timelines[a.0], t)).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(std::iter::once(horizon.to_string().len()))
        .max()
        .unwrap_or(1);
    let name_w = instance.helicopters.iter().map(|h| h.id.len()).max().unwrap_or(1);

    let mut s = String::new();
    let _ = write!(s, "{:name_w$}", "");
    for t in 1..=horizon {
        let _ = write!(s, " {t:>width$}");
    }
    s.push('\n');
    for (h, row) in instance.helicopters.iter().zip(&cells) {
        let _ = write!(s, "{:name_w$}", h.id);
        for c in row {
            let _ = write!(s, " {c:>width$}");
        }
        s.push('\n');
    }
    s.push('\n');
    s.push_str(&render_windows(instance, schedule));
    s
}

/// Work windows in table form: one line per helicopter with the clock span
/// and drops of each window, then the total drops.
pub fn render_windows(instance: &Instance, schedule: &Schedule) -> String {
    let name_w = instance.helicopters.iter().map(|h| h.id.len()).max().unwrap_or(1);
    let mut s = String::new();
    for (h, wins) in instance.helicopters.iter().zip(work_windows(instance, schedule)) {
        let _ = write!(s, "{:name_w$}", h.id);
        for w in &wins {
            let _ = write!(s, "  {}-{} ({})", w.start, w.end, w.drops);
        }
        let total: u32 = wins.iter().map(|w| w.drops).sum();
        let _ = writeln!(s, "  total {total}");
    }
    s
}

const CELL: usize = 8;
const ROW: usize = 20;
const LEFT: usize = 48;
const TOP: usize = 24;

fn colour(instance: &Instance, act: Activity) -> &'static str {
    match act {
        Activity::Fly(_) => "#9e9e9e",
        Activity::Unplaced => "#ffffff",
        Activity::At(i) => match instance.partition(i) {
            Partition::Start => "#e0e0e0",
            Partition::Water => "#1e88e5",
            Partition::Wildfire => "#e53935",
            Partition::Base => "#fff3c4",
        },
    }
}

/// SVG variant of the Gantt chart, one row per helicopter, hourly ticks.
pub fn render_svg(instance: &Instance, schedule: &Schedule) -> String {
    let horizon = instance.horizon();
    let n = instance.helicopters.len();
    let (w, h) = (LEFT + horizon * CELL + 8, TOP + n * ROW + 8);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="10">"#
    );
    let per_hour = (60 / instance.grid.interval_minutes.max(1)).max(1) as usize;
    for t in (0..=horizon).step_by(per_hour) {
        let x = LEFT + t * CELL;
        let _ = writeln!(s, r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#bdbdbd"/>"##, TOP - 4, TOP + n * ROW);
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#, TOP - 8, instance.grid.clock_at(t));
    }
    for a in instance.helicopter_ids() {
        let y = TOP + a.0 * ROW;
        let line = &schedule.timelines[a.0];
        let _ = writeln!(s, r#"<text x="4" y="{}">{}</text>"#, y + ROW / 2 + 4, instance.heli(a).id);
        let mut t = 0;
        while t < horizon {
            let mut end = t + 1;
            while end < horizon && line[end] == line[t] {
                end += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"><title>{} {}</title></rect>"#,
                LEFT + t * CELL,
                y + 2,
                (end - t) * CELL,
                ROW - 4,
                colour(instance, line[t]),
                glyph(instance, line, t),
                span(instance, t, end),
            );
            t = end;
        }
    }
    s.push_str("</svg>\n");
    s
}

fn span(instance: &Instance, from: usize, to: usize) -> String {
    format!("{}-{}", instance.grid.clock_at(from), instance.grid.clock_at(to))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{b12_fixture, PUBLISHED_DROPS};
    use crate::config::Config;

    #[test]
    fn h1_windows_on_the_clock() {
        let f = b12_fixture(Config::default().calibration.b12);
        let wins = work_windows(&f.instance, &f.schedule);
        let h1: Vec<String> = wins[0].iter().map(|w| format!("{}-{}", w.start, w.end)).collect();
        assert_eq!(h1, ["10:25-12:25", "13:05-14:55", "15:35-17:20"]);
        assert!(wins.iter().all(|w| w.len() == 3));
        let drops: Vec<u32> = wins.iter().map(|w| w.iter().map(|x| x.drops).sum()).collect();
        assert_eq!(drops, PUBLISHED_DROPS);
    }

    #[test]
    fn parked_grid_is_all_p() {
        let f = b12_fixture(Config::default().calibration.b12);
        let text = render_schedule(&f.instance, &Schedule::parked(&f.instance));
        for row in text.lines().skip(1).take(10) {
            let cells: Vec<&str> = row.split_whitespace().skip(1).collect();
            assert_eq!(cells.len(), 96);
            assert!(cells.iter().all(|c| c.starts_with('P')));
        }
    }

    #[test]
    fn rows_have_one_cell_per_interval() {
        let f = b12_fixture(Config::default().calibration.b12);
        let text = render_schedule(&f.instance, &f.schedule);
        let rows: Vec<&str> = text.lines().skip(1).take(10).collect();
        assert!(rows.iter().all(|r| r.split_whitespace().count() == 97));
        assert!(rows[0].split_whitespace().nth(6) == Some("F"));
        let svg = render_svg(&f.instance, &f.schedule);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
