#include "trcm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "trcm/error.hpp"

namespace trcm {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string round_csv(const ExperimentResult& result) {
  std::string out = kRoundCsvHeader;
  out += '\n';
  for (std::size_t t = 0; t < result.rounds(); ++t) {
    out += std::to_string(t + 1);
    for (double v : {result.mean_cum_regret[t], result.mean_round_regret[t],
                     result.mean_user_utility[t], result.mean_clairvoyant_utility[t]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string run_csv(const ExperimentResult& result) {
  std::string out = kRunCsvHeader;
  out += '\n';
  for (const RunMetrics& run : result.runs) {
    out += std::to_string(run.seed);
    out += ',' + format_double(run.total_regret);
    out += ',' + format_double(run.total_utility);
    out += ',' + format_double(run.total_payments);
    out += ',' + std::to_string(run.resample_count);
    out += '\n';
  }
  return out;
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir) {
  write_text_file(dir / "metrics_by_round.csv", round_csv(result));
  write_text_file(dir / "runs_summary.csv", run_csv(result));
}

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string render(const std::string& title, const std::string& ylabel,
                   const std::vector<Series>& series) {
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
  constexpr std::size_t kMaxPoints = 1000;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const std::size_t n = series.front().y.size();
  double ymin = 0.0, ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  const double xmax = static_cast<double>(std::max<std::size_t>(n, 2));
  auto px = [&](double t) { return kLeft + plot_w * (t - 1.0) / (xmax - 1.0); };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - ymin) / (ymax - ymin)); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";
  // Axes.
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" +
         fmt(kLeft + plot_w) + "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
         "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymin + (ymax - ymin) * k / 4.0;
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(v) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt_tick(v) + "</text>\n";
    const double t = 1.0 + (xmax - 1.0) * k / 4.0;
    svg += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + fmt_tick(std::round(t)) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 20) +
         "\" text-anchor=\"middle\" font-size=\"13\">round t</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt(kTop + plot_h / 2) + ")\">" + ylabel + "</text>\n";

  const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPoints - 1) / kMaxPoints);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t t = 0; t < n; t += stride) {
      svg += fmt(px(static_cast<double>(t + 1))) + "," + fmt(py(s.y[t])) + " ";
    }
    svg += fmt(px(static_cast<double>(n))) + "," + fmt(py(s.y[n - 1]));
    svg += "\"><title>" + s.label + "</title></polyline>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(k);
    svg += "<line x1=\"" + fmt(kLeft + 12) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(kLeft + 32) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + s.color + "\"/>\n";
    svg += "<text x=\"" + fmt(kLeft + 38) + "\" y=\"" + fmt(ly) + "\" font-size=\"12\">" +
           s.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::string render_plot(const ExperimentResult& result, PlotKind kind) {
  const std::size_t n = result.rounds();
  if (n == 0) throw ValidationError("cannot plot empty metrics");
  switch (kind) {
    case PlotKind::CumRegret: {
      // sqrt(t) guide matched to the regret curve at T/2.
      const std::size_t half = std::max<std::size_t>(1, n / 2);
      const double c = result.mean_cum_regret[half - 1] / std::sqrt(static_cast<double>(half));
      std::vector<double> guide(n);
      for (std::size_t t = 0; t < n; ++t) guide[t] = c * std::sqrt(static_cast<double>(t + 1));
      return render("Mean cumulative regret", "cumulative regret",
                    {{"mean cumulative regret", "#1f77b4", result.mean_cum_regret},
                     {"scaled sqrt(t) reference", "#d62728", guide}});
    }
    case PlotKind::RoundRegret: {
      const std::size_t window = std::max<std::size_t>(1, n / 50);
      std::vector<double> smooth(n);
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        acc += result.mean_round_regret[t];
        if (t >= window) acc -= result.mean_round_regret[t - window];
        smooth[t] = acc / static_cast<double>(std::min(t + 1, window));
      }
      return render("Mean regret per round", "regret per round",
                    {{"mean per-round regret", "#1f77b4", result.mean_round_regret},
                     {"moving average", "#d62728", smooth}});
    }
    case PlotKind::Revenue:
      return render("Cumulative user utility", "cumulative utility",
                    {{"mechanism", "#1f77b4", result.mean_user_utility},
                     {"clairvoyant benchmark", "#2ca02c", result.mean_clairvoyant_utility}});
  }
  throw ValidationError("unknown plot kind");
}

void emit_plot(const ExperimentResult& result, PlotKind kind, const std::filesystem::path& path) {
  write_text_file(path, render_plot(result, kind));
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  emit_csv(result, dir);
  emit_plot(result, PlotKind::CumRegret, dir / "cum_regret.svg");
  emit_plot(result, PlotKind::RoundRegret, dir / "round_regret.svg");
  emit_plot(result, PlotKind::Revenue, dir / "revenue.svg");
}

}  // namespace trcm
