import {
    ApiError,
    fetchClassification,
    fetchExamples,
    fetchOrbit,
    type ExampleRow,
    type OrbitPayload,
} from './api.js'
import { badgeText } from './badge.js'
import { DEFAULT_API_BASE, ORBIT_MAX_POINTS } from './constants.js'
import type { PaneSize, Point } from './geometry.js'
import { pixelToPoint, pointToPixel, zoomedIn, zoomedOut } from './geometry.js'
import {
    decodeFragment,
    defaultState,
    encodeFragment,
    withLambda,
    type ExplorerState,
} from './state.js'
import { context2d, TileLayer, type FetchLike } from './tiles.js'

export interface AppOptions {
    apiBase?: string
    paneSize?: PaneSize
    fetchFn?: FetchLike
    onFragmentChange?: (fragment: string) => void
}

const ORBIT_COLORS: Record<'v0' | 'v1', string> = { v0: '#1e3cdc', v1: '#dc8a1e' }

function el<K extends keyof HTMLElementTagNameMap>(
    doc: Document,
    tag: K,
    className?: string,
): HTMLElementTagNameMap[K] {
    const node = doc.createElement(tag)
    if (className) node.className = className
    return node
}

export class ExplorerApp {
    state: ExplorerState
    readonly badge: HTMLElement
    readonly toast: HTMLElement
    readonly examplesSelect: HTMLSelectElement
    readonly paramCanvas: HTMLCanvasElement
    readonly juliaCanvas: HTMLCanvasElement
    readonly overlayCanvas: HTMLCanvasElement

    private readonly apiBase: string
    private readonly pane: PaneSize
    private readonly paramTiles: TileLayer
    private readonly juliaTiles: TileLayer
    private overlayCtx: CanvasRenderingContext2D | null = null
    private selection: AbortController | null = null
    private examples: ExampleRow[] = []
    private readonly onFragmentChange?: (fragment: string) => void

    constructor(root: HTMLElement, opts: AppOptions = {}) {
        this.apiBase = opts.apiBase ?? DEFAULT_API_BASE
        this.pane = opts.paneSize ?? { width: 512, height: 512 }
        this.onFragmentChange = opts.onFragmentChange
        this.state = defaultState()

        const doc = root.ownerDocument
        const bar = el(doc, 'div', 'toolbar')
        this.examplesSelect = el(doc, 'select', 'examples')
        const placeholder = el(doc, 'option')
        placeholder.textContent = 'examples…'
        placeholder.value = ''
        this.examplesSelect.appendChild(placeholder)
        bar.appendChild(this.examplesSelect)
        this.badge = el(doc, 'span', 'badge')
        bar.appendChild(this.badge)
        this.toast = el(doc, 'div', 'toast')
        root.appendChild(bar)

        const panes = el(doc, 'div', 'panes')
        this.paramCanvas = el(doc, 'canvas', 'pane-param')
        this.juliaCanvas = el(doc, 'canvas', 'pane-julia')
        this.overlayCanvas = el(doc, 'canvas', 'pane-overlay')
        for (const c of [this.paramCanvas, this.juliaCanvas, this.overlayCanvas]) {
            c.width = this.pane.width
            c.height = this.pane.height
        }
        panes.appendChild(this.paramCanvas)
        const juliaWrap = el(doc, 'div', 'julia-wrap')
        juliaWrap.appendChild(this.juliaCanvas)
        juliaWrap.appendChild(this.overlayCanvas)
        panes.appendChild(juliaWrap)
        root.appendChild(panes)
        root.appendChild(this.toast)

        this.paramTiles = new TileLayer(this.paramCanvas, this.apiBase, opts.fetchFn)
        this.juliaTiles = new TileLayer(this.juliaCanvas, this.apiBase, opts.fetchFn)
        this.overlayCtx = context2d(this.overlayCanvas)

        this.paramCanvas.addEventListener('click', (ev) => {
            const rect = this.paramCanvas.getBoundingClientRect()
            void this.clickParamAt(ev.clientX - rect.left, ev.clientY - rect.top)
        })
        this.examplesSelect.addEventListener('change', () => {
            const idx = this.examplesSelect.selectedIndex - 1
            if (idx >= 0) void this.selectExample(idx)
        })
    }

    fragment(): string {
        return encodeFragment(this.state)
    }

    restore(fragment: string): void {
        this.state = decodeFragment(fragment)
    }

    private publishFragment(): void {
        this.onFragmentChange?.(this.fragment())
    }

    showToast(message: string): void {
        this.toast.textContent = message
        this.toast.classList.add('visible')
    }

    clearToast(): void {
        this.toast.textContent = ''
        this.toast.classList.remove('visible')
    }

    async start(fragment = ''): Promise<void> {
        if (fragment) this.restore(fragment)
        await Promise.all([this.loadExamples(), this.refreshParam()])
        if (this.state.selectedLambda) {
            await this.applySelection(this.state.selectedLambda)
        }
    }

    private async loadExamples(): Promise<void> {
        try {
            this.examples = await fetchExamples(this.apiBase)
        } catch {
            this.showToast('examples unavailable')
            return
        }
        const doc = this.examplesSelect.ownerDocument
        for (const row of this.examples) {
            const opt = doc.createElement('option')
            opt.value = row.name
            opt.textContent = row.name
            this.examplesSelect.appendChild(opt)
        }
    }

    exampleRows(): readonly ExampleRow[] {
        return this.examples
    }

    async refreshParam(): Promise<void> {
        this.publishFragment()
        await this.paramTiles.update(this.state.paramView, 'param', this.state.n, null, this.state.budget)
    }

    async refreshJulia(): Promise<void> {
        this.publishFragment()
        const lam = this.state.selectedLambda
        if (!lam) return
        await this.juliaTiles.update(this.state.juliaView, 'julia', this.state.n, lam, this.state.budget)
    }

    async clickParamAt(px: number, py: number): Promise<void> {
        const lam = pixelToPoint(this.state.paramView, this.pane, px, py)
        if (lam.re === 0 && lam.im === 0) {
            this.showToast('λ must be nonzero')
            return
        }
        await this.applySelection(lam)
    }

    async selectExample(index: number): Promise<void> {
        const row = this.examples[index]
        if (!row) return
        this.state = { ...this.state, n: row.n }
        await this.applySelection({ re: row.re, im: row.im })
    }

    private async applySelection(lam: Point): Promise<void> {
        this.clearToast()
        this.selection?.abort()
        const controller = new AbortController()
        this.selection = controller

        this.state = withLambda(this.state, lam)
        this.publishFragment()
        this.badge.textContent = 'classifying…'

        const juliaLoad = this.refreshJulia()
        try {
            const verdict = await fetchClassification(
                this.apiBase,
                this.state.n,
                lam,
                undefined,
                controller.signal,
            )
            if (this.selection === controller) {
                this.badge.textContent = badgeText(verdict.kind, verdict.subcase)
            }
        } catch (err) {
            if (this.selection === controller) {
                this.badge.textContent = ''
                this.showToast(err instanceof ApiError ? err.detail : 'request failed')
            }
        }
        await this.drawOrbits(controller)
        await juliaLoad
    }

    private async drawOrbits(controller: AbortController): Promise<void> {
        const lam = this.state.selectedLambda
        const ctx = this.overlayCtx
        ctx?.clearRect(0, 0, this.pane.width, this.pane.height)
        if (!lam) return
        const seeds: ('v0' | 'v1')[] = []
        if (this.state.overlays.orbitV0) seeds.push('v0')
        if (this.state.overlays.orbitV1) seeds.push('v1')
        if (this.state.overlays.markers && seeds.length === 0) seeds.push('v0', 'v1')
        for (const seed of seeds) {
            let orbit: OrbitPayload
            try {
                orbit = await fetchOrbit(
                    this.apiBase,
                    this.state.n,
                    lam,
                    seed,
                    ORBIT_MAX_POINTS,
                    controller.signal,
                )
            } catch {
                return
            }
            if (this.selection !== controller) return
            this.paintOrbit(orbit, seed)
        }
    }

    private paintOrbit(orbit: OrbitPayload, seed: 'v0' | 'v1'): void {
        const ctx = this.overlayCtx
        if (!ctx) return
        const view = this.state.juliaView
        const color = ORBIT_COLORS[seed]

        if (this.state.overlays[seed === 'v0' ? 'orbitV0' : 'orbitV1']) {
            ctx.strokeStyle = color
            ctx.lineWidth = 1.5
            ctx.beginPath()
            let started = false
            for (const p of orbit.trace.slice(0, ORBIT_MAX_POINTS)) {
                if (!p) break // orbit left for infinity; nothing finite to draw
                const { x, y } = pointToPixel(view, this.pane, p)
                if (started) ctx.lineTo(x, y)
                else ctx.moveTo(x, y)
                started = true
            }
            if (started) ctx.stroke()
        }
        if (this.state.overlays.markers && orbit.seed) {
            const { x, y } = pointToPixel(view, this.pane, orbit.seed)
            ctx.fillStyle = color
            ctx.beginPath()
            ctx.arc(x, y, 5, 0, 2 * Math.PI)
            ctx.fill()
        }
    }

    async zoomPane(pane: 'param' | 'julia', direction: 'in' | 'out'): Promise<void> {
        const step = direction === 'in' ? zoomedIn : zoomedOut
        if (pane === 'param') {
            this.state = { ...this.state, paramView: step(this.state.paramView) }
            await this.refreshParam()
        } else {
            this.state = { ...this.state, juliaView: step(this.state.juliaView) }
            await this.refreshJulia()
        }
    }

    dispose(): void {
        this.paramTiles.cancel()
        this.juliaTiles.cancel()
        this.selection?.abort()
    }
}

export function createApp(root: HTMLElement, opts: AppOptions = {}): ExplorerApp {
    return new ExplorerApp(root, opts)
}
