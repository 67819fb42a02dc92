/**
 * Browser wiring: connects the session client to a WebSocket and renders
 * with plain DOM + SVG. All interaction logic lives in the tested modules
 * (client, barchart, meter); this file only binds events and paints.
 */

import { amountFromDrag, barAt, layoutBars, type Bar, type ChartLayout } from "./barchart.js";
import { SessionClient, type Channel } from "./client.js";
import { EMPTY_METER } from "./meter.js";

const SVG_NS = "http://www.w3.org/2000/svg";

class WebSocketChannel implements Channel {
  private socket: WebSocket;

  constructor(url: string, client: () => SessionClient) {
    this.socket = new WebSocket(url);
    this.socket.onopen = () => client().connect();
    this.socket.onmessage = (event) => client().handleLine(String(event.data));
    this.socket.onclose = () => client().channelDown();
    this.socket.onerror = () => client().channelDown();
  }

  send(line: string): void {
    this.socket.send(line);
  }
}

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  parent: Element,
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text) node.textContent = text;
  parent.appendChild(node);
  return node;
}

function drawChart(
  svg: SVGSVGElement,
  layout: ChartLayout,
  overlay: ChartLayout | null,
  onDragEnd: ((bar: Bar, deltaY: number) => void) | null,
  onPreview: ((bar: Bar, deltaY: number) => void) | null,
): void {
  svg.innerHTML = "";
  svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
  const axis = document.createElementNS(SVG_NS, "line");
  axis.setAttribute("x1", "0");
  axis.setAttribute("x2", String(layout.width));
  axis.setAttribute("y1", String(layout.axisY));
  axis.setAttribute("y2", String(layout.axisY));
  axis.setAttribute("stroke", "#666");
  svg.appendChild(axis);

  for (const bar of layout.bars) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(bar.x));
    rect.setAttribute("y", String(bar.y));
    rect.setAttribute("width", String(bar.width));
    rect.setAttribute("height", String(Math.max(bar.height, 1)));
    rect.setAttribute("fill", bar.kind === "revenue" ? "#2b8a3e" : "#c92a2a");
    rect.setAttribute("data-category", bar.category);
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = `${bar.category}: ${bar.amount}M\n${bar.description}`;
    rect.appendChild(tooltip);
    if (onDragEnd) {
      rect.style.cursor = "ns-resize";
      rect.addEventListener("pointerdown", (down: PointerEvent) => {
        down.preventDefault();
        const startY = down.clientY;
        const move = (event: PointerEvent) => onPreview?.(bar, event.clientY - startY);
        const up = (event: PointerEvent) => {
          window.removeEventListener("pointermove", move);
          window.removeEventListener("pointerup", up);
          onDragEnd(bar, event.clientY - startY);
        };
        window.addEventListener("pointermove", move);
        window.addEventListener("pointerup", up);
      });
    }
    svg.appendChild(rect);
  }

  if (overlay) {
    for (const bar of overlay.bars) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(bar.x + bar.width * 0.25));
      rect.setAttribute("y", String(bar.y));
      rect.setAttribute("width", String(bar.width * 0.5));
      rect.setAttribute("height", String(Math.max(bar.height, 1)));
      rect.setAttribute("fill", "rgba(25, 60, 140, 0.55)");
      svg.appendChild(rect);
    }
  }
}

function boot(): void {
  const root = document.getElementById("app");
  if (!root) return;

  const controls = element("div", root);
  const sessionInput = element("input", controls);
  sessionInput.placeholder = "session id";
  const userInput = element("input", controls);
  userInput.placeholder = "user";
  const connectButton = element("button", controls, "connect");

  const banner = element("div", root);
  banner.style.color = "#c92a2a";
  const overview = element("div", root);
  const meterLabel = element("div", root);
  const meterBar = element("div", root);
  meterBar.style.cssText = "height:10px;background:#2b6cb0;width:0;transition:width .2s";
  const overlayToggle = element("button", root, "overlay: over-mine");
  const mineSvg = document.createElementNS(SVG_NS, "svg");
  mineSvg.style.cssText = "width:48%;height:320px";
  const partnerSvg = document.createElementNS(SVG_NS, "svg");
  partnerSvg.style.cssText = "width:48%;height:320px";
  root.appendChild(mineSvg);
  root.appendChild(partnerSvg);
  const suggestionPanel = element("div", root);

  let client: SessionClient | null = null;

  const repaint = () => {
    if (!client) return;
    const state = client.state;
    banner.textContent = state.reconnectBanner ? "connection lost, reconnect to edit" : "";
    overview.textContent = `overview delta: ${client.overviewDelta()}M`;
    const meter = state.meter ?? EMPTY_METER;
    meterLabel.textContent = `disagreement: ${meter.label}`;
    meterBar.style.width = `${meter.fill * 100}%`;
    overlayToggle.textContent = `overlay: ${state.overlay}`;

    const effective = client.effectiveAmounts();
    const mine = layoutBars(state.categories, effective, { width: 640, height: 320 });
    drawChart(
      mineSvg,
      mine,
      null,
      state.editsEnabled
        ? (bar, deltaY) => client?.submitAdjust(bar.category, amountFromDrag(bar, deltaY, mine))
        : null,
      state.editsEnabled
        ? (bar, deltaY) => client?.previewAdjust(bar.category, amountFromDrag(bar, deltaY, mine))
        : null,
    );
    const partner = layoutBars(state.categories, state.partnerAmounts, {
      width: 640,
      height: 320,
    });
    const base = layoutBars(state.categories, client.overlayBase(), { width: 640, height: 320 });
    drawChart(partnerSvg, base, partner, null, null);

    suggestionPanel.innerHTML = "";
    for (const category of state.categories) {
      const ranked = client.suggestionsFor(category.id);
      if (!ranked.length) continue;
      const block = element("div", suggestionPanel, `${category.name}:`);
      for (const suggestion of ranked.slice(0, 3)) {
        const pick = element(
          "button",
          block,
          `${suggestion.target}M (${suggestion.usage} using) ${suggestion.rationale}`,
        );
        pick.addEventListener("click", () => client?.selectProposal(suggestion.proposalId));
      }
    }
  };

  overlayToggle.addEventListener("click", () => {
    client?.setOverlay(client.state.overlay === "over-mine" ? "over-baseline" : "over-mine");
  });

  connectButton.addEventListener("click", () => {
    const sessionId = sessionInput.value.trim();
    const user = userInput.value.trim();
    if (!sessionId || !user) return;
    const url = `ws://${window.location.host}/ws/sessions/${sessionId}?user=${user}`;
    const channel = new WebSocketChannel(url, () => client as SessionClient);
    client = new SessionClient(channel, sessionId, user);
    client.onChange(repaint);
  });
}

boot();
