import { tileUrl } from './api.js'
import { TILE_SIZE } from './constants.js'
import type { PaneSize, Point, View } from './geometry.js'
import { tilesFor, zoomFor } from './geometry.js'

export type FetchLike = (url: string, init?: { signal?: AbortSignal }) => Promise<Response>

// headless test environments have canvases without drawing contexts
export function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
    try {
        return canvas.getContext('2d')
    } catch {
        return null
    }
}

// Canvas tile layer. Each update() cancels whatever the previous update was
// still downloading; stale tiles must never paint over a newer viewport.
export class TileLayer {
    private controller: AbortController | null = null
    private generation = 0
    private readonly ctx: CanvasRenderingContext2D | null

    constructor(
        private readonly canvas: HTMLCanvasElement,
        private readonly apiBase: string,
        private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
    ) {
        this.ctx = context2d(canvas)
    }

    cancel(): void {
        this.controller?.abort()
        this.controller = null
    }

    async update(
        view: View,
        plane: 'param' | 'julia',
        n: number,
        lam: Point | null,
        budget: number,
    ): Promise<void> {
        this.cancel()
        const controller = new AbortController()
        this.controller = controller
        const generation = ++this.generation

        const pane: PaneSize = { width: this.canvas.width, height: this.canvas.height }
        const zoom = zoomFor(view, pane)
        const placements = tilesFor(view, pane, zoom)
        const ctx = this.ctx
        ctx?.clearRect(0, 0, pane.width, pane.height)

        await Promise.all(
            placements.map(async (t) => {
                const url = tileUrl(this.apiBase, plane, n, zoom, t.tx, t.ty, lam, budget)
                let resp: Response
                try {
                    resp = await this.fetchFn(url, { signal: controller.signal })
                } catch {
                    return // aborted or network failure; newer update will repaint
                }
                if (!resp.ok || generation !== this.generation || !ctx) return
                const blob = await resp.blob()
                if (typeof createImageBitmap !== 'function') return
                const bitmap = await createImageBitmap(blob)
                if (generation !== this.generation) return
                ctx.drawImage(
                    bitmap,
                    Math.round(t.screenX),
                    Math.round(t.screenY),
                    Math.round(t.screenSize),
                    Math.round(t.screenSize),
                )
            }),
        )
    }
}

export function tileCount(view: View, pane: PaneSize): number {
    return tilesFor(view, pane, zoomFor(view, pane)).length
}

export { TILE_SIZE }
