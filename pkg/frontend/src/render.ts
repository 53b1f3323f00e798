/** Server-side SVG rendering of capacity curves with error bands. */

import * as echarts from "echarts";

import { Curve } from "./aggregate";

export interface RenderOptions {
  title: string;
  xLabel: string;
  width?: number;
  height?: number;
}

/**
 * One line per scheme with a shaded mean +- 1 standard-error band.
 * The band uses the stacked-area idiom: an invisible line at (mean - se)
 * and a filled strip of height 2 se stacked on top of it.
 */
export function renderCurves(curves: Curve[], options: RenderOptions): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: options.width ?? 880,
    height: options.height ?? 560,
  });
  const series: echarts.SeriesOption[] = [];
  for (const curve of curves) {
    const stack = `band-${curve.scheme}`;
    series.push({
      name: `${curve.scheme}-band-low`,
      type: "line",
      stack,
      data: curve.points.map((p) => [p.x, p.mean - p.stderr]),
      lineStyle: { opacity: 0 },
      symbol: "none",
      tooltip: { show: false },
    });
    series.push({
      name: `${curve.scheme}-band`,
      type: "line",
      stack,
      data: curve.points.map((p) => [p.x, 2 * p.stderr]),
      lineStyle: { opacity: 0 },
      symbol: "none",
      areaStyle: { opacity: 0.18 },
      tooltip: { show: false },
    });
    series.push({
      name: curve.scheme,
      type: "line",
      data: curve.points.map((p) => [p.x, p.mean]),
      symbol: "circle",
      symbolSize: 5,
    });
  }
  chart.setOption({
    animation: false,
    title: { text: options.title, left: "center" },
    legend: {
      bottom: 0,
      data: curves.map((c) => c.scheme),
    },
    grid: { left: 70, right: 30, top: 60, bottom: 70 },
    xAxis: {
      type: "value",
      name: options.xLabel,
      nameLocation: "middle",
      nameGap: 30,
    },
    yAxis: {
      type: "value",
      name: "mean capacity (bits/s/Hz)",
      nameLocation: "middle",
      nameGap: 45,
    },
    series,
  });
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}
