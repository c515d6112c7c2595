import init, { position_density, ghost_trace, width_curves } from "./pkg/biphoton_web.js";

const $ = (id) => document.getElementById(id);
const value = (id) => parseFloat($(id).value);

function bind(ids, render, live) {
  for (const id of ids) {
    const input = $(id);
    const out = $(id + "-out");
    const show = () => { out.textContent = input.value; };
    show();
    input.addEventListener("input", () => { show(); if (live) render(); });
    input.addEventListener("change", render);
  }
  render();
}

const STOPS = [[0, 0, 4], [120, 28, 109], [237, 105, 37], [252, 255, 164]];

function heat(t) {
  const x = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const k = Math.min(STOPS.length - 2, Math.floor(x));
  const f = x - k;
  return STOPS[k].map((c, j) => c + f * (STOPS[k + 1][j] - c));
}

function drawDensity() {
  const stats = $("correlation-stats");
  try {
    const img = position_density(value("pump"), value("sq"), value("sc"), value("iq"), value("ic"));
    const n = img.size;
    const data = img.values();
    const canvas = $("density");
    const ctx = canvas.getContext("2d");
    const pixels = ctx.createImageData(n, n);
    for (let k = 0; k < n * n; k++) {
      const [r, g, b] = heat(Math.sqrt(data[k]));
      pixels.data.set([r, g, b, 255], 4 * k);
    }
    const off = new OffscreenCanvas(n, n);
    off.getContext("2d").putImageData(pixels, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    const predicted = Number.isNaN(img.predicted) ? "" : `\nclosed form   ${img.predicted.toExponential(3)} mm²`;
    stats.className = "stats";
    stats.textContent =
      `Δx₋²         ${img.delta_x_minus_sq.toExponential(3)} mm²${predicted}\n` +
      `x₋ skewness   ${img.skewness.toFixed(3)}`;
    img.free();
  } catch (e) {
    stats.className = "stats error";
    stats.textContent = String(e);
  }
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 4, w - pad - 4, h - pad - 4);
}

function plot(ctx, xs, ys, color, box) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  xs.forEach((x, k) => {
    const px = box.x0 + (x - box.xmin) / (box.xmax - box.xmin) * box.w;
    const py = box.y0 + box.h - (ys[k] - box.ymin) / (box.ymax - box.ymin) * box.h;
    if (k === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function drawTrace() {
  const stats = $("ghost-stats");
  try {
    const trace = ghost_trace(value("ts"), value("ti"));
    const xs = trace.positions();
    const ys = trace.rates();
    const canvas = $("trace");
    const ctx = canvas.getContext("2d");
    const pad = 30;
    axes(ctx, canvas.width, canvas.height, pad);
    const box = {
      x0: pad, y0: 4, w: canvas.width - pad - 4, h: canvas.height - pad - 4,
      xmin: xs[0], xmax: xs[xs.length - 1], ymin: 0, ymax: Math.max(...ys) * 1.05 || 1,
    };
    plot(ctx, xs, ys, "#1f5fbf", box);
    ctx.fillStyle = "#555";
    ctx.fillText(xs[0].toFixed(1), pad, canvas.height - 10);
    ctx.fillText(xs[xs.length - 1].toFixed(1), canvas.width - 24, canvas.height - 10);
    const period = Number.isNaN(trace.period) ? "none" : `${trace.period.toFixed(3)} mm`;
    stats.className = "stats";
    stats.textContent = `visibility   ${trace.visibility.toFixed(3)}\nperiod       ${period}`;
    trace.free();
  } catch (e) {
    stats.className = "stats error";
    stats.textContent = String(e);
  }
}

function drawCurves() {
  const curves = width_curves(value("alpha"), value("wpump"), value("bmax"), 201);
  const beta = curves.beta();
  const series = [
    [curves.slice(), "#1f5fbf"],
    [curves.expansion(), "#e07b00"],
    [curves.marginal(), "#2a9d3a"],
  ];
  curves.free();
  const positive = series.flatMap(([ys]) => ys.filter((y) => y > 0));
  const ymin = Math.log10(Math.min(...positive));
  const ymax = Math.log10(Math.max(...positive));
  const canvas = $("curves");
  const ctx = canvas.getContext("2d");
  const pad = 30;
  axes(ctx, canvas.width, canvas.height, pad);
  const box = {
    x0: pad, y0: 4, w: canvas.width - pad - 4, h: canvas.height - pad - 4,
    xmin: beta[0], xmax: beta[beta.length - 1], ymin, ymax: ymax > ymin ? ymax : ymin + 1,
  };
  for (const [ys, color] of series) {
    plot(ctx, beta, ys.map((y) => (y > 0 ? Math.log10(y) : ymin)), color, box);
  }
  ctx.fillStyle = "#555";
  ctx.fillText(`1e${ymax.toFixed(1)}`, 2, 14);
  ctx.fillText(`1e${ymin.toFixed(1)}`, 2, canvas.height - pad);
}

await init();
bind(["pump", "sq", "sc", "iq", "ic"], drawDensity, false);
bind(["ts", "ti"], drawTrace, false);
bind(["alpha", "wpump", "bmax"], drawCurves, true);
