/**
 * SVG view of the editor: lattice, channels, inlet/outlet markers, and live
 * outlet values. Absent lattice edges render as faint ghosts so every
 * channel slot is clickable.
 */

import { ChannelKind, Design, hasChannel } from "./model.js";
import { EditorState, SimulateResponse } from "./state.js";

const CELL = 44;
const MARGIN = 56;
const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderHandlers {
  onChannelClick(kind: ChannelKind, row: number, col: number): void;
  onTopClick(col: number): void;
  onBottomClick(col: number): void;
}

function meanConcentration(profile: {
  valueLeft: number;
  valueRight: number;
  flatLeft: number;
  flatRight: number;
  width: number;
}): number {
  const mid = profile.width - profile.flatLeft - profile.flatRight;
  const area =
    profile.valueLeft * profile.flatLeft +
    profile.valueRight * profile.flatRight +
    0.5 * (profile.valueLeft + profile.valueRight) * mid;
  return area / profile.width;
}

export function concentrationColor(c: number): string {
  const clamped = Math.min(Math.max(c, 0), 1);
  const red = Math.round(40 + 200 * clamped);
  const blue = Math.round(40 + 200 * (1 - clamped));
  return `rgb(${red},60,${blue})`;
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function renderEditor(
  svg: SVGSVGElement,
  state: EditorState,
  handlers: RenderHandlers,
): void {
  const design = state.design;
  const response = state.dirty ? null : state.lastResponse;
  svg.innerHTML = "";
  const width = 2 * MARGIN + design.cols * CELL;
  const height = 2 * MARGIN + (design.rows + 2) * CELL;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  const x = (col: number) => MARGIN + col * CELL;
  const y = (row: number) => MARGIN + (row + 1) * CELL;

  const channelColor = (kind: ChannelKind, row: number, col: number): string => {
    const profile = response?.edgeProfiles?.[`${kind}:${row}:${col}`];
    return profile ? concentrationColor(meanConcentration(profile)) : "#777";
  };

  const drawSlot = (kind: ChannelKind, row: number, col: number) => {
    const present = hasChannel(design, kind, row, col);
    const [x1, y1] = [x(col), y(row)];
    const [x2, y2] = kind === "h" ? [x(col + 1), y(row)] : [x(col), y(row + 1)];
    if (present) {
      svg.appendChild(
        el("line", {
          x1, y1, x2, y2,
          stroke: channelColor(kind, row, col),
          "stroke-width": 7,
          "stroke-linecap": "round",
        }),
      );
    } else {
      svg.appendChild(
        el("line", {
          x1, y1, x2, y2,
          stroke: "#d9d9d9",
          "stroke-width": 1.5,
          "stroke-dasharray": "4 5",
        }),
      );
    }
    const hit = el("line", {
      x1, y1, x2, y2,
      stroke: "transparent",
      "stroke-width": 16,
      cursor: "pointer",
    });
    hit.addEventListener("click", () => handlers.onChannelClick(kind, row, col));
    svg.appendChild(hit);
  };

  for (let r = 0; r <= design.rows; r++) {
    for (let c = 0; c < design.cols; c++) drawSlot("h", r, c);
  }
  for (let r = 0; r < design.rows; r++) {
    for (let c = 0; c <= design.cols; c++) drawSlot("v", r, c);
  }

  // inlet markers and stubs along the top edge
  for (let c = 0; c <= design.cols; c++) {
    const inlet = design.inlets.find((i) => i.col === c);
    if (inlet) {
      svg.appendChild(
        el("line", {
          x1: x(c), y1: y(-1), x2: x(c), y2: y(0),
          stroke: concentrationColor(inlet.concentration),
          "stroke-width": 7,
          "stroke-linecap": "round",
        }),
      );
      const label = el("text", {
        x: x(c), y: y(-1) - 24, "text-anchor": "middle", "font-size": 11,
      });
      label.textContent = `c=${inlet.concentration}`;
      svg.appendChild(label);
      const speed = el("text", {
        x: x(c), y: y(-1) - 10, "text-anchor": "middle", "font-size": 11,
      });
      speed.textContent = `v=${inlet.velocity}`;
      svg.appendChild(speed);
    }
    const zone = el("circle", {
      cx: x(c), cy: y(-1), r: 9,
      fill: inlet ? concentrationColor(inlet.concentration) : "#eee",
      stroke: "#999", cursor: "pointer",
    });
    zone.addEventListener("click", () => handlers.onTopClick(c));
    svg.appendChild(zone);
  }

  // outlet markers, stubs, and predicted values along the bottom edge
  for (let c = 0; c <= design.cols; c++) {
    const index = design.outlets.indexOf(c);
    if (index >= 0) {
      svg.appendChild(
        el("line", {
          x1: x(c), y1: y(design.rows), x2: x(c), y2: y(design.rows + 1),
          stroke: "#777", "stroke-width": 7, "stroke-linecap": "round",
        }),
      );
      const value = response?.outlets[index];
      const label = el("text", {
        x: x(c), y: y(design.rows + 1) + 22, "text-anchor": "middle", "font-size": 12,
      });
      label.textContent =
        value == null
          ? "…"
          : value.concentration == null
            ? "no flow"
            : value.concentration.toFixed(3);
      svg.appendChild(label);
    }
    const zone = el("rect", {
      x: x(c) - 8, y: y(design.rows + 1) - 8, width: 16, height: 16,
      fill: index >= 0 ? "#777" : "#eee", stroke: "#999", cursor: "pointer",
    });
    zone.addEventListener("click", () => handlers.onBottomClick(c));
    svg.appendChild(zone);
  }

  for (let r = 0; r <= design.rows; r++) {
    for (let c = 0; c <= design.cols; c++) {
      svg.appendChild(el("circle", { cx: x(c), cy: y(r), r: 2, fill: "#555" }));
    }
  }
}

export function describeOutlets(design: Design, response: SimulateResponse | null): string {
  if (!response) return "no results yet";
  return design.outlets
    .map((col, i) => {
      const value = response.outlets[i];
      const text =
        value == null || value.concentration == null
          ? "no flow"
          : `${value.concentration.toFixed(4)} @ ${value.velocity.toFixed(3)} mm/s`;
      return `outlet ${col}: ${text}`;
    })
    .join("\n");
}
