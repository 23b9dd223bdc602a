/** The per-chart plot widget: the original chart plus a horizontally
 * scrollable row of fact cards.
 *
 * Each card shows the illustrated chart, a fact-type dropdown, an editable
 * description, and a plus/minus toggle that adds the fact to (or removes it
 * from) the story.  Clicking a data mark on a card requests a single-point
 * highlight at that value.  Every interaction round-trips through the
 * service and re-renders from the response, so the gallery never invents
 * state the server does not hold.
 */

import type { ApiClient } from "./api.js";
import { keyFromClick, renderChartSvg } from "./chart.js";
import type { FactDto, Outline } from "./types.js";
import { FACT_TYPES } from "./types.js";

export interface GalleryOptions {
  /** Called with the fresh outline after any add/remove toggle. */
  onOutline?: (outline: Outline) => void;
}

export class FactCardGallery {
  private facts = new Map<string, FactDto>();
  private chartOrder: string[] = [];
  private chartFacts = new Map<string, string[]>();
  private baseSpecs = new Map<string, FactDto["embellished_spec"]>();
  private selected = new Set<string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: GalleryOptions = {},
  ) {
    root.classList.add("fact-gallery");
    root.addEventListener("click", (event) => void this.onClick(event));
    root.addEventListener("change", (event) => void this.onChange(event));
    root.addEventListener("focusout", (event) => void this.onFocusOut(event));
  }

  /** Register a mined chart and its facts (ordered by descending score). */
  addChart(chartId: string, facts: FactDto[]): void {
    this.chartOrder.push(chartId);
    this.chartFacts.set(chartId, facts.map((f) => f.id));
    for (const fact of facts) {
      this.facts.set(fact.id, fact);
      if (!this.baseSpecs.has(chartId)) {
        const { annotations: _annotations, ...base } = fact.embellished_spec;
        this.baseSpecs.set(chartId, base as FactDto["embellished_spec"]);
      }
    }
    this.render();
  }

  setSelection(selected: string[]): void {
    this.selected = new Set(selected);
    this.render();
  }

  render(): void {
    this.root.replaceChildren();
    for (const chartId of this.chartOrder) {
      this.root.appendChild(this.renderChartRow(chartId));
    }
  }

  private renderChartRow(chartId: string): HTMLElement {
    const row = document.createElement("section");
    row.className = "chart-row";
    row.dataset.chartId = chartId;

    const factIds = this.chartFacts.get(chartId) ?? [];
    const first = factIds.length ? this.facts.get(factIds[0]) : undefined;
    const original = document.createElement("figure");
    original.className = "original-chart";
    const baseSpec = this.baseSpecs.get(chartId);
    if (baseSpec && first) {
      original.innerHTML = renderChartSvg(baseSpec, first.series);
    }
    row.appendChild(original);

    const strip = document.createElement("div");
    strip.className = "card-strip";
    for (const factId of factIds) {
      const fact = this.facts.get(factId);
      if (fact) strip.appendChild(this.renderCard(fact));
    }
    const addCard = document.createElement("button");
    addCard.className = "add-card";
    addCard.dataset.chartId = chartId;
    addCard.textContent = "+ new fact";
    addCard.title = "Add an empty fact card";
    strip.appendChild(addCard);
    row.appendChild(strip);
    return row;
  }

  private renderCard(fact: FactDto): HTMLElement {
    const card = document.createElement("article");
    const inStory = this.selected.has(fact.id);
    card.className = `fact-card${inStory ? " selected" : ""}`;
    card.dataset.factId = fact.id;

    const chart = document.createElement("div");
    chart.className = "card-chart";
    chart.innerHTML = renderChartSvg(fact.embellished_spec, fact.series);
    card.appendChild(chart);

    const controls = document.createElement("div");
    controls.className = "card-controls";

    const dropdown = document.createElement("select");
    dropdown.className = "fact-type";
    for (const name of FACT_TYPES) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      option.selected = name === fact.fact_type;
      dropdown.appendChild(option);
    }
    controls.appendChild(dropdown);

    const toggle = document.createElement("button");
    toggle.className = "story-toggle";
    toggle.dataset.factId = fact.id;
    toggle.textContent = inStory ? "−" : "+";
    toggle.title = inStory ? "Remove from story" : "Add to story";
    controls.appendChild(toggle);

    const remove = document.createElement("button");
    remove.className = "delete-card";
    remove.textContent = "×";
    remove.title = "Delete this card";
    controls.appendChild(remove);
    card.appendChild(controls);

    const description = document.createElement("p");
    description.className = "description";
    description.contentEditable = "true";
    description.textContent = fact.description;
    card.appendChild(description);

    const error = document.createElement("p");
    error.className = "card-error";
    error.hidden = true;
    card.appendChild(error);
    return card;
  }

  private cardOf(target: EventTarget | null): HTMLElement | null {
    return target instanceof Element ? target.closest<HTMLElement>(".fact-card") : null;
  }

  private async onClick(event: Event): Promise<void> {
    const target = event.target;
    if (!(target instanceof Element)) return;

    const addCard = target.closest<HTMLElement>(".add-card");
    if (addCard?.dataset.chartId) {
      await this.guard(addCard, () => this.addEmptyCard(addCard.dataset.chartId!));
      return;
    }

    const card = this.cardOf(target);
    if (!card?.dataset.factId) return;
    const factId = card.dataset.factId;

    if (target.closest(".story-toggle")) {
      await this.guard(card, () => this.toggleStory(factId));
      return;
    }
    if (target.closest(".delete-card")) {
      await this.guard(card, () => this.deleteCard(factId));
      return;
    }
    const key = keyFromClick(target);
    if (key !== null && target.closest(".card-chart")) {
      await this.guard(card, async () => {
        const patched = await this.api.patchFact(factId, { focus: [key] });
        this.facts.set(factId, patched);
        this.render();
      });
    }
  }

  private async onChange(event: Event): Promise<void> {
    const target = event.target;
    if (!(target instanceof HTMLSelectElement) || !target.classList.contains("fact-type")) {
      return;
    }
    const card = this.cardOf(target);
    if (!card?.dataset.factId) return;
    const factId = card.dataset.factId;
    await this.guard(card, async () => {
      const patched = await this.api.patchFact(factId, { fact_type: target.value });
      this.facts.set(factId, patched);
      this.render();
    });
  }

  private async onFocusOut(event: Event): Promise<void> {
    const target = event.target;
    if (!(target instanceof HTMLElement) || !target.classList.contains("description")) {
      return;
    }
    const card = this.cardOf(target);
    if (!card?.dataset.factId) return;
    const factId = card.dataset.factId;
    const text = target.textContent ?? "";
    const current = this.facts.get(factId);
    if (!current || current.description === text) return;
    await this.guard(card, async () => {
      const patched = await this.api.patchFact(factId, { description: text });
      this.facts.set(factId, patched);
      this.render();
    });
  }

  private async toggleStory(factId: string): Promise<void> {
    const outline = this.selected.has(factId)
      ? await this.api.deselectFact(factId)
      : await this.api.selectFact(factId);
    this.selected = new Set(outline.selected);
    this.render();
    this.options.onOutline?.(outline);
  }

  private async deleteCard(factId: string): Promise<void> {
    if (this.selected.has(factId)) {
      const outline = await this.api.deselectFact(factId);
      this.selected = new Set(outline.selected);
      this.options.onOutline?.(outline);
    }
    for (const [chartId, ids] of this.chartFacts) {
      const next = ids.filter((id) => id !== factId);
      if (next.length !== ids.length) this.chartFacts.set(chartId, next);
    }
    this.facts.delete(factId);
    this.render();
  }

  private async addEmptyCard(chartId: string): Promise<void> {
    const fact = await this.api.addUserFact({ chart_id: chartId });
    this.facts.set(fact.id, fact);
    const ids = this.chartFacts.get(chartId) ?? [];
    this.chartFacts.set(chartId, [...ids, fact.id]);
    this.render();
  }

  /** Run an interaction, surfacing any service error inline on the card. */
  private async guard(card: HTMLElement, action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (err) {
      const slot = card.querySelector<HTMLElement>(".card-error");
      if (slot) {
        slot.textContent = err instanceof Error ? err.message : String(err);
        slot.hidden = false;
      }
    }
  }
}
