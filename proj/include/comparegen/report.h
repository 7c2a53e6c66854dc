#pragma once

#include <map>
#include <string>
#include <vector>

namespace comparegen {

// A fully formatted table: cells are display strings, numbers already
// fixed to their final precision. When row_link_ids is non-empty it has
// one entry per row; a non-empty id turns the row's first cell into a
// hyperlink to examples/<id>.html in the HTML rendering.
struct TableData {
  std::string id;  // file stem for latex/<id>.tex
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row_link_ids;
};

struct BarSeries {
  std::string name;
  std::vector<double> values;
};

// Grouped bar chart: one bar per (group, series) pair. Negative values
// hang below the zero baseline (log likelihoods).
struct BarChartData {
  std::string id;  // file stem for charts/<id>.svg
  std::string title;
  std::string y_label;
  std::vector<std::string> group_labels;
  std::vector<BarSeries> series;
};

struct ExampleLine {
  std::string label;
  std::string text;
};

// One ranked example: the reference and each system's output, labeled.
struct ExampleBlock {
  std::string title;
  std::vector<ExampleLine> lines;
};

// A static page behind a bucket row, listing that bucket's sentences.
struct DrilldownPage {
  std::string id;  // file stem for examples/<id>.html
  std::string title;
  std::vector<TableData> tables;
  std::vector<ExampleBlock> examples;
};

struct AnalysisSection {
  std::string title;
  std::vector<std::string> notes;
  std::vector<TableData> tables;
  std::vector<BarChartData> charts;
  std::vector<ExampleBlock> examples;
  std::vector<DrilldownPage> drilldowns;
};

struct ReportDocument {
  std::string title;
  std::vector<AnalysisSection> sections;
};

// ------------------------------------------------------------ formatting

// Fixed-point with the sign dropped from negative zero, so equal values
// always render to equal bytes.
std::string fmt_fixed(double v, int decimals);

// "p<0.001" when no losses were observed, 4 decimals below 0.01,
// 2 decimals otherwise.
std::string fmt_p_value(double p);

std::string xml_escape(const std::string& text);
std::string latex_escape(const std::string& text);

// ------------------------------------------------------------- renderers

// Plain-text report: aligned columns, deterministic bytes.
std::string render_text(const ReportDocument& doc);

// One LaTeX tabular environment for a table.
std::string render_latex(const TableData& table);

// Standalone SVG document. Throws std::invalid_argument on non-finite
// values or mismatched series lengths.
std::string render_svg_bar_chart(const BarChartData& chart);

// The whole static report tree as relative-path -> file content:
// index.html, charts/*.svg, examples/*.html, latex/*.tex, report.txt.
// Pure function of the document; writing is the caller's concern.
std::map<std::string, std::string> render_report_tree(
    const ReportDocument& doc);

}  // namespace comparegen
