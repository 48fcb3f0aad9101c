import init, { probe_map, phase_scan, witness_curve } from "./pkg/faraday_browser.js";

const $ = (id) => document.getElementById(id);

function guard(errorId, fn) {
  $(errorId).textContent = "";
  try {
    fn();
  } catch (e) {
    $(errorId).textContent = String(e.message ?? e);
  }
}

function heatmap(canvas, values, cols, rows) {
  const ctx = canvas.getContext("2d");
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const w = canvas.width / cols;
  const h = canvas.height / rows;
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const t = hi > lo ? (values[r * cols + c] - lo) / (hi - lo) : 0;
      const v = Math.round(255 * t);
      ctx.fillStyle = `rgb(${v}, ${Math.round(v * 0.8)}, ${255 - v})`;
      ctx.fillRect(c * w, canvas.height - (r + 1) * h, Math.ceil(w), Math.ceil(h));
    }
  }
}

function lines(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const all = series.flatMap((s) => s.ys).filter(Number.isFinite).concat([0]);
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const pad = 20;
  const sx = (x) => pad + ((x - xs[0]) / (xs[xs.length - 1] - xs[0])) * (canvas.width - 2 * pad);
  const sy = (y) => canvas.height - pad - ((y - lo) / (hi - lo || 1)) * (canvas.height - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0));
  ctx.lineTo(canvas.width - pad, sy(0));
  ctx.stroke();
  for (const { ys, color } of series) {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(sx(xs[i]), sy(y)) : ctx.moveTo(sx(xs[i]), sy(y))));
    ctx.stroke();
  }
}

function drawMap() {
  const theta = Number($("map-theta").value);
  $("map-theta-out").textContent = theta.toFixed(2);
  guard("map-error", () => {
    const cols = 64;
    const rows = 24;
    const values = probe_map(theta * Math.PI, Number($("map-length").value), cols, rows);
    heatmap($("map"), values, cols, rows);
  });
}

function drawScan() {
  guard("scan-error", () => {
    const points = 25;
    const data = phase_scan(Number($("scan-length").value), -0.7 * Math.PI, 0.5 * Math.PI, points);
    const xs = [], c = [], d = [];
    for (let i = 0; i < points; i++) {
      xs.push(data[5 * i] / Math.PI);
      c.push(data[5 * i + 1]);
      d.push(data[5 * i + 2]);
    }
    lines($("scan"), xs, [
      { ys: c, color: "#c33" },
      { ys: d, color: "#36c" },
    ]);
  });
}

function drawWitness() {
  const theta = Number($("w-theta").value);
  const alpha = Number($("w-alpha").value);
  $("w-theta-out").textContent = theta.toFixed(2);
  $("w-alpha-out").textContent = alpha.toFixed(2);
  guard("w-error", () => {
    const points = 48;
    const data = witness_curve(theta * Math.PI, 8, alpha, points);
    const xs = [], ws = [];
    for (let i = 0; i < points; i++) {
      xs.push(data[2 * i]);
      ws.push(data[2 * i + 1]);
    }
    lines($("witness"), xs, [{ ys: ws, color: "#393" }]);
  });
}

await init();
$("map-theta").addEventListener("input", drawMap);
$("map-length").addEventListener("change", drawMap);
$("scan-run").addEventListener("click", drawScan);
$("w-theta").addEventListener("input", drawWitness);
$("w-alpha").addEventListener("input", drawWitness);
drawMap();
drawWitness();
