#include "comparegen/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "comparegen/corpus.h"

namespace comparegen {

namespace {

const char* kBarColors[] = {"#4c78a8", "#f58518", "#54a24b",
                            "#e45756", "#72b7b2", "#b279a2"};
constexpr std::size_t kNumBarColors = sizeof(kBarColors) / sizeof(*kBarColors);

std::string printf_str(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Display width in code points; cells may hold multi-byte characters.
std::size_t display_width(const std::string& s) {
  return decode_utf8(s).size();
}

std::string pad_left(const std::string& s, std::size_t width) {
  std::size_t w = display_width(s);
  return w >= width ? s : std::string(width - w, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

}  // namespace

// ------------------------------------------------------------ formatting

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string out = buf;
  // "-0.00" and "0.00" are the same number; never let the sign of a
  // rounded-away negative leak into the report bytes.
  if (out.size() > 1 && out[0] == '-' &&
      out.find_first_not_of(".0", 1) == std::string::npos)
    out.erase(0, 1);
  return out;
}

std::string fmt_p_value(double p) {
  if (p == 0.0) return "p<0.001";
  if (p < 0.01) return "p=" + fmt_fixed(p, 4);
  return "p=" + fmt_fixed(p, 2);
}

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string latex_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '&': out += "\\&"; break;
      case '%': out += "\\%"; break;
      case '$': out += "\\$"; break;
      case '#': out += "\\#"; break;
      case '_': out += "\\_"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      default: out += c;
    }
  }
  return out;
}

// ------------------------------------------------------------------ text

namespace {

void check_table(const TableData& table) {
  for (const auto& row : table.rows)
    if (row.size() != table.header.size())
      throw std::invalid_argument("table row width differs from header: " +
                                  table.title);
  if (!table.row_link_ids.empty() &&
      table.row_link_ids.size() != table.rows.size())
    throw std::invalid_argument("row_link_ids size mismatch: " + table.title);
}

void render_text_table(const TableData& table, std::string& out) {
  check_table(table);
  if (!table.title.empty()) out += table.title + "\n";
  std::vector<std::size_t> widths(table.header.size(), 0);
  for (std::size_t c = 0; c < table.header.size(); ++c)
    widths[c] = display_width(table.header[c]);
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], display_width(row[c]));

  auto emit_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += "  ";
      // First column is the row's name; the rest are usually numbers.
      out += c == 0 ? pad_right(cells[c], widths[c])
                    : pad_left(cells[c], widths[c]);
    }
    // Padding never leaves trailing spaces on the last column.
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  };

  emit_row(table.header);
  std::size_t total = 0;
  for (std::size_t c = 0; c < widths.size(); ++c)
    total += widths[c] + (c > 0 ? 2 : 0);
  out += std::string(total, '-') + "\n";
  for (const auto& row : table.rows) emit_row(row);
}

void render_text_examples(const std::vector<ExampleBlock>& blocks,
                          std::string& out) {
  if (blocks.empty()) {
    out += "(none)\n";
    return;
  }
  for (const auto& block : blocks) {
    out += block.title + "\n";
    std::size_t label_w = 0;
    for (const auto& line : block.lines)
      label_w = std::max(label_w, display_width(line.label));
    for (const auto& line : block.lines)
      out += "  " + pad_right(line.label + ":", label_w + 1) + " " +
             line.text + "\n";
  }
}

}  // namespace

std::string render_text(const ReportDocument& doc) {
  std::string out = doc.title + "\n" +
                    std::string(display_width(doc.title), '=') + "\n";
  for (const auto& section : doc.sections) {
    out += "\n## " + section.title + "\n\n";
    for (const auto& note : section.notes) out += note + "\n";
    if (!section.notes.empty()) out += "\n";
    for (std::size_t t = 0; t < section.tables.size(); ++t) {
      render_text_table(section.tables[t], out);
      out += "\n";
    }
    if (!section.examples.empty() || section.tables.empty()) {
      render_text_examples(section.examples, out);
      if (!section.examples.empty()) out += "\n";
    }
    while (out.size() >= 2 && out.substr(out.size() - 2) == "\n\n")
      out.pop_back();
    out += "\n";
  }
  return out;
}

// ----------------------------------------------------------------- LaTeX

std::string render_latex(const TableData& table) {
  check_table(table);
  std::string out = "\\begin{tabular}{";
  for (std::size_t c = 0; c < table.header.size(); ++c)
    out += c == 0 ? 'l' : 'r';
  out += "}\n\\hline\n";
  auto emit_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += " & ";
      out += latex_escape(cells[c]);
    }
    out += " \\\\\n";
  };
  emit_row(table.header);
  out += "\\hline\n";
  for (const auto& row : table.rows) emit_row(row);
  out += "\\hline\n\\end{tabular}\n";
  return out;
}

// ------------------------------------------------------------------- SVG

namespace {

std::string coord(double v) { return printf_str("%.2f", v); }

std::string tick_label(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  return printf_str("%g", v);
}

}  // namespace

std::string render_svg_bar_chart(const BarChartData& chart) {
  if (chart.group_labels.empty() || chart.series.empty())
    throw std::invalid_argument("bar chart needs groups and series");
  double vmin = 0.0, vmax = 0.0;
  for (const auto& series : chart.series) {
    if (series.values.size() != chart.group_labels.size())
      throw std::invalid_argument("bar chart series length mismatch");
    for (double v : series.values) {
      if (!std::isfinite(v))
        throw std::invalid_argument("bar chart value is not finite");
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (vmin == vmax) vmax = 1.0;  // all zero: keep a drawable scale

  const double bar_w = 18, bar_gap = 2, group_gap = 18;
  const double margin_left = 64, margin_right = 16;
  const double margin_top = 48, margin_bottom = 80;
  const double plot_h = 220;
  std::size_t groups = chart.group_labels.size();
  std::size_t nseries = chart.series.size();
  double group_w = nseries * bar_w + (nseries - 1) * bar_gap;
  double plot_w = groups * group_w + (groups - 1) * group_gap + 16;
  double width = margin_left + plot_w + margin_right;
  double height = margin_top + plot_h + margin_bottom;

  auto y_of = [&](double v) {
    return margin_top + plot_h * (vmax - v) / (vmax - vmin);
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) +
         "\" height=\"" + coord(height) + "\" viewBox=\"0 0 " + coord(width) +
         " " + coord(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>" + xml_escape(chart.title) + "</title>\n";
  svg += "<text x=\"" + coord(width / 2) +
         "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\" "
         "font-weight=\"bold\">" +
         xml_escape(chart.title) + "</text>\n";

  // Legend row under the title.
  double legend_x = margin_left;
  for (std::size_t s = 0; s < nseries; ++s) {
    const std::string color = kBarColors[s % kNumBarColors];
    svg += "<rect x=\"" + coord(legend_x) +
           "\" y=\"24\" width=\"11\" height=\"11\" fill=\"" + color +
           "\"/>\n";
    svg += "<text x=\"" + coord(legend_x + 15) + "\" y=\"34\">" +
           xml_escape(chart.series[s].name) + "</text>\n";
    legend_x += 15.0 + 7.0 * (double)chart.series[s].name.size() + 18.0;
  }

  // Horizontal grid lines with value labels.
  for (int t = 0; t <= 4; ++t) {
    double v = vmin + (vmax - vmin) * t / 4.0;
    double y = y_of(v);
    svg += "<line x1=\"" + coord(margin_left) + "\" y1=\"" + coord(y) +
           "\" x2=\"" + coord(margin_left + plot_w) + "\" y2=\"" + coord(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + coord(margin_left - 6) + "\" y=\"" + coord(y + 4) +
           "\" text-anchor=\"end\">" + xml_escape(tick_label(v)) +
           "</text>\n";
  }

  for (std::size_t g = 0; g < groups; ++g) {
    double gx = margin_left + 8 + g * (group_w + group_gap);
    for (std::size_t s = 0; s < nseries; ++s) {
      double v = chart.series[s].values[g];
      double x = gx + s * (bar_w + bar_gap);
      double y0 = y_of(0.0), y1 = y_of(v);
      double top = std::min(y0, y1);
      double h = std::abs(y1 - y0);
      svg += "<rect x=\"" + coord(x) + "\" y=\"" + coord(top) +
             "\" width=\"" + coord(bar_w) + "\" height=\"" + coord(h) +
             "\" fill=\"" + kBarColors[s % kNumBarColors] + "\"/>\n";
    }
    double cx = gx + group_w / 2;
    double ly = margin_top + plot_h + 14;
    svg += "<text x=\"" + coord(cx) + "\" y=\"" + coord(ly) +
           "\" text-anchor=\"end\" transform=\"rotate(-35 " + coord(cx) + " " +
           coord(ly) + ")\">" + xml_escape(chart.group_labels[g]) +
           "</text>\n";
  }

  // Axes: left edge and zero baseline.
  svg += "<line x1=\"" + coord(margin_left) + "\" y1=\"" + coord(margin_top) +
         "\" x2=\"" + coord(margin_left) + "\" y2=\"" +
         coord(margin_top + plot_h) + "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + coord(margin_left) + "\" y1=\"" + coord(y_of(0.0)) +
         "\" x2=\"" + coord(margin_left + plot_w) + "\" y2=\"" +
         coord(y_of(0.0)) + "\" stroke=\"#333333\"/>\n";
  if (!chart.y_label.empty()) {
    double ty = margin_top + plot_h / 2;
    svg += "<text x=\"14\" y=\"" + coord(ty) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " + coord(ty) +
           ")\">" + xml_escape(chart.y_label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// ------------------------------------------------------------------ HTML

namespace {

const char kCss[] =
    "body{font-family:sans-serif;margin:2em;max-width:75em;}\n"
    "table{border-collapse:collapse;margin:0.8em 0;}\n"
    "th,td{border:1px solid #bbbbbb;padding:0.25em 0.6em;text-align:right;}\n"
    "th:first-child,td:first-child{text-align:left;}\n"
    "caption{font-weight:bold;text-align:left;padding:0.3em 0;}\n"
    "h2{border-bottom:2px solid #4c78a8;padding-bottom:0.2em;}\n"
    ".note{color:#555555;font-style:italic;}\n"
    ".example{margin:0.9em 0;border-left:3px solid #4c78a8;padding:0 0 0 "
    "0.8em;}\n"
    ".example h4{margin:0.2em 0;}\n"
    ".example dt{font-weight:bold;float:left;clear:left;width:6em;}\n"
    ".example dd{margin:0 0 0.2em 6.5em;}\n";

void open_page(std::string& html, const std::string& title) {
  html += "<!DOCTYPE html>\n";
  html += "<html xmlns=\"http://www.w3.org/1999/xhtml\">\n<head>\n";
  html += "<meta charset=\"utf-8\"/>\n";
  html += "<title>" + xml_escape(title) + "</title>\n";
  html += "<style>\n";
  html += kCss;
  html += "</style>\n</head>\n<body>\n";
}

void render_html_table(const TableData& table, const std::string& link_prefix,
                       std::string& html) {
  check_table(table);
  html += "<table>\n";
  if (!table.title.empty())
    html += "<caption>" + xml_escape(table.title) + "</caption>\n";
  html += "<thead>\n<tr>";
  for (const auto& cell : table.header)
    html += "<th>" + xml_escape(cell) + "</th>";
  html += "</tr>\n</thead>\n<tbody>\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    html += "<tr>";
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      std::string cell = xml_escape(table.rows[r][c]);
      if (c == 0 && !table.row_link_ids.empty() &&
          !table.row_link_ids[r].empty())
        cell = "<a href=\"" + link_prefix +
               xml_escape(table.row_link_ids[r]) + ".html\">" + cell + "</a>";
      html += "<td>" + cell + "</td>";
    }
    html += "</tr>\n";
  }
  html += "</tbody>\n</table>\n";
}

void render_html_examples(const std::vector<ExampleBlock>& blocks,
                          std::string& html) {
  if (blocks.empty()) {
    html += "<p>(none)</p>\n";
    return;
  }
  for (const auto& block : blocks) {
    html += "<div class=\"example\">\n<h4>" + xml_escape(block.title) +
            "</h4>\n<dl>\n";
    for (const auto& line : block.lines)
      html += "<dt>" + xml_escape(line.label) + "</dt><dd>" +
              xml_escape(line.text) + "</dd>\n";
    html += "</dl>\n</div>\n";
  }
}

// The standalone SVG minus its XML prolog, for inlining into XHTML.
std::string inline_svg(const std::string& svg) {
  std::size_t pos = svg.find("?>\n");
  return pos == std::string::npos ? svg : svg.substr(pos + 3);
}

std::string render_drilldown(const DrilldownPage& page) {
  std::string html;
  open_page(html, page.title);
  html += "<p><a href=\"../index.html\">&#8592; back to the report</a></p>\n";
  html += "<h1>" + xml_escape(page.title) + "</h1>\n";
  for (const auto& table : page.tables) render_html_table(table, "", html);
  render_html_examples(page.examples, html);
  html += "</body>\n</html>\n";
  return html;
}

}  // namespace

std::map<std::string, std::string> render_report_tree(
    const ReportDocument& doc) {
  std::map<std::string, std::string> files;
  auto add = [&files](const std::string& path, std::string content) {
    if (!files.emplace(path, std::move(content)).second)
      throw std::invalid_argument("duplicate report artifact: " + path);
  };

  add("report.txt", render_text(doc));

  std::string html;
  open_page(html, doc.title);
  html += "<h1>" + xml_escape(doc.title) + "</h1>\n";
  for (const auto& section : doc.sections) {
    html += "<h2>" + xml_escape(section.title) + "</h2>\n";
    for (const auto& note : section.notes)
      html += "<p class=\"note\">" + xml_escape(note) + "</p>\n";
    for (const auto& table : section.tables) {
      render_html_table(table, "examples/", html);
      if (!table.id.empty())
        add("latex/" + table.id + ".tex", render_latex(table));
    }
    for (const auto& chart : section.charts) {
      std::string svg = render_svg_bar_chart(chart);
      html += inline_svg(svg);
      add("charts/" + chart.id + ".svg", std::move(svg));
    }
    if (!section.examples.empty()) render_html_examples(section.examples, html);
    for (const auto& page : section.drilldowns)
      add("examples/" + page.id + ".html", render_drilldown(page));
  }
  html += "</body>\n</html>\n";
  add("index.html", std::move(html));
  return files;
}

}  // namespace comparegen
